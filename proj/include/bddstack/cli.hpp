#ifndef BDDSTACK_CLI_HPP
#define BDDSTACK_CLI_HPP

#include <bddstack/report.hpp>
#include <bddstack/runner.hpp>
#include <bddstack/steps.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace bddstack {

/// Command-line entry point shared by the stock `bddstack` tool and by host
/// programs that link their own step definitions:
///
///     bddstack [run|dry-run|lint] [--language en|pt] [--manifest PATH]
///              [--stop-on-failure] [--format plain|json] PATH...
///
/// `host` supplies the frozen registry used in run mode; without one every
/// step resolves as undefined. Usage, parse and configuration errors exit 3.
inline int cli_main(int argc, const char* const* argv, const StepRegistry* host = nullptr,
                    std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Runs narrative Given/When/Then stories", "bddstack"};
  app.require_subcommand(1, 1);

  RunConfig config;
  std::string format = "plain";
  auto add_options = [&](CLI::App* sub) {
    sub->add_option("--language", config.language, "Keyword language")
        ->check(CLI::IsMember({"en", "pt"}));
    sub->add_option("--manifest", config.manifest, "Step manifest (required for dry-run)");
    sub->add_flag("--stop-on-failure", config.stop_on_failure,
                  "Stop after the first failed scenario");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"plain", "json"}));
    sub->add_option("paths", config.inputs, "Story files, directories or globs")->required();
  };
  auto* run_cmd = app.add_subcommand("run", "Execute stories against the step definitions");
  auto* dry_cmd = app.add_subcommand("dry-run", "Resolve steps against a manifest without executing");
  auto* lint_cmd = app.add_subcommand("lint", "Parse stories only");
  for (auto* sub : {run_cmd, dry_cmd, lint_cmd})
    add_options(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  }

  config.mode = dry_cmd->parsed() ? Mode::DryRun : lint_cmd->parsed() ? Mode::Lint : Mode::Run;
  config.format = format == "json" ? Format::Json : Format::Plain;

  StepRegistry empty;
  empty.freeze();
  try {
    auto report = run(config, host ? host : &empty);
    out << format_report(report, config.format);
    return exit_code(report);
  } catch (const ToolError& e) {
    if (e.loc())
      err << to_string(*e.loc()) << ": ";
    err << to_string(e.kind()) << ": " << e.message() << "\n";
    return exit_code(e);
  }
}

}  // namespace bddstack

#endif  // BDDSTACK_CLI_HPP
