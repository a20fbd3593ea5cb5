#ifndef BDDSTACK_RUNNER_HPP
#define BDDSTACK_RUNNER_HPP

#include <bddstack/error.hpp>
#include <bddstack/keywords.hpp>
#include <bddstack/parser.hpp>
#include <bddstack/steps.hpp>
#include <bddstack/story.hpp>

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace bddstack {

enum class StepStatus { Passed, Failed, Errored, Undefined, Ambiguous, Skipped };

constexpr std::string_view to_string(StepStatus s) noexcept {
  switch (s) {
    case StepStatus::Passed: return "passed";
    case StepStatus::Failed: return "failed";
    case StepStatus::Errored: return "errored";
    case StepStatus::Undefined: return "undefined";
    case StepStatus::Ambiguous: return "ambiguous";
    case StepStatus::Skipped: return "skipped";
  }
  return "errored";
}

enum class Outcome { Passed, Failed, Undefined };

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Passed: return "passed";
    case Outcome::Failed: return "failed";
    case Outcome::Undefined: return "undefined";
  }
  return "failed";
}

struct StepResult {
  Step step;
  StepStatus status = StepStatus::Skipped;
  std::string message;
  double duration_ms = 0.0;
};

struct ScenarioResult {
  Scenario scenario;
  std::vector<StepResult> steps;
  Outcome outcome = Outcome::Passed;
};

struct StoryResult {
  Story story;
  std::vector<ScenarioResult> scenarios;
};

struct Counters {
  std::size_t scenarios_passed = 0;
  std::size_t scenarios_failed = 0;
  std::size_t scenarios_undefined = 0;
  std::size_t steps_passed = 0;
  std::size_t steps_failed = 0;
  std::size_t steps_errored = 0;
  std::size_t steps_undefined = 0;
  std::size_t steps_ambiguous = 0;
  std::size_t steps_skipped = 0;

  std::size_t scenarios() const noexcept {
    return scenarios_passed + scenarios_failed + scenarios_undefined;
  }
  std::size_t steps() const noexcept {
    return steps_passed + steps_failed + steps_errored + steps_undefined + steps_ambiguous +
           steps_skipped;
  }

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// A load-time problem tied to one input file (parse errors, stories
/// without scenarios). Any of these forces exit code 3.
struct LoadError {
  ErrorKind kind;
  std::string message;
  std::optional<SourceLoc> loc;
};

struct RunReport {
  std::vector<StoryResult> stories;
  std::vector<LoadError> errors;
  Counters counters;
};

inline Counters recount(const std::vector<StoryResult>& stories) {
  Counters c;
  for (const auto& story : stories)
    for (const auto& sc : story.scenarios) {
      switch (sc.outcome) {
        case Outcome::Passed: ++c.scenarios_passed; break;
        case Outcome::Failed: ++c.scenarios_failed; break;
        case Outcome::Undefined: ++c.scenarios_undefined; break;
      }
      for (const auto& st : sc.steps)
        switch (st.status) {
          case StepStatus::Passed: ++c.steps_passed; break;
          case StepStatus::Failed: ++c.steps_failed; break;
          case StepStatus::Errored: ++c.steps_errored; break;
          case StepStatus::Undefined: ++c.steps_undefined; break;
          case StepStatus::Ambiguous: ++c.steps_ambiguous; break;
          case StepStatus::Skipped: ++c.steps_skipped; break;
        }
    }
  return c;
}

inline Outcome outcome_of(const std::vector<StepResult>& steps) {
  bool undefined = false;
  for (const auto& st : steps) {
    if (st.status == StepStatus::Failed || st.status == StepStatus::Errored)
      return Outcome::Failed;
    undefined |= st.status == StepStatus::Undefined || st.status == StepStatus::Ambiguous;
  }
  bool all_passed = std::all_of(steps.begin(), steps.end(),
                                [](const StepResult& s) { return s.status == StepStatus::Passed; });
  if (undefined)
    return Outcome::Undefined;
  return all_passed ? Outcome::Passed : Outcome::Failed;
}

namespace detail {

inline std::string describe_ambiguity(const Ambiguous& amb) {
  std::string out = "matches " + std::to_string(amb.candidates.size()) + " definitions:";
  for (const auto* def : amb.candidates)
    out += " '" + def->pattern.raw() + "'";
  return out;
}

}  // namespace detail

/// Runs one scenario in a fresh context. The first step that does not pass
/// stops execution; everything after it is Skipped.
inline ScenarioResult run_scenario(const Scenario& scenario, const StepRegistry& reg) {
  using clock = std::chrono::steady_clock;
  ScenarioResult result{scenario, {}, Outcome::Passed};
  ScenarioContext context;
  bool halted = false;
  for (const auto& step : scenario.steps) {
    StepResult sr{step, StepStatus::Skipped, {}, 0.0};
    if (!halted) {
      auto match = reg.resolve(step);
      if (std::holds_alternative<Undefined>(match)) {
        sr.status = StepStatus::Undefined;
      } else if (auto amb = std::get_if<Ambiguous>(&match)) {
        sr.status = StepStatus::Ambiguous;
        sr.message = detail::describe_ambiguity(*amb);
      } else {
        const auto& m = std::get<Matched>(match);
        auto start = clock::now();
        try {
          m.definition->handler(context, m.captures);
          sr.status = StepStatus::Passed;
        } catch (const ToolError& e) {
          sr.status = e.kind() == ErrorKind::ExpectationFailure ? StepStatus::Failed
                                                                : StepStatus::Errored;
          sr.message = e.message();
        } catch (const std::exception& e) {
          sr.status = StepStatus::Errored;
          sr.message = e.what();
        } catch (...) {
          sr.status = StepStatus::Errored;
          sr.message = "unknown exception";
        }
        sr.duration_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
      }
      halted = sr.status != StepStatus::Passed;
    }
    result.steps.push_back(std::move(sr));
  }
  result.outcome = outcome_of(result.steps);
  return result;
}

/// Resolves every step without executing anything. Bound steps report
/// Passed; unbound steps report Undefined or Ambiguous. Nothing is skipped.
inline ScenarioResult dry_run_scenario(const Scenario& scenario, const StepRegistry& reg) {
  ScenarioResult result{scenario, {}, Outcome::Passed};
  for (const auto& step : scenario.steps) {
    StepResult sr{step, StepStatus::Passed, {}, 0.0};
    auto match = reg.resolve(step);
    if (std::holds_alternative<Undefined>(match)) {
      sr.status = StepStatus::Undefined;
    } else if (auto amb = std::get_if<Ambiguous>(&match)) {
      sr.status = StepStatus::Ambiguous;
      sr.message = detail::describe_ambiguity(*amb);
    }
    result.steps.push_back(std::move(sr));
  }
  result.outcome = outcome_of(result.steps);
  return result;
}

enum class Mode { Run, DryRun, Lint };
enum class Format { Plain, Json };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string language = "en";
  Mode mode = Mode::Run;
  std::optional<std::string> manifest;
  bool stop_on_failure = false;
  Format format = Format::Plain;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail_config("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Expands inputs into a sorted, de-duplicated file list. Directories
/// contribute every `*.story` file below them; patterns containing glob
/// metacharacters are expanded; other paths are taken as given.
inline std::vector<std::string> collect_inputs(const std::vector<std::string>& inputs) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  auto add_path = [&](const fs::path& p) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (auto it = fs::recursive_directory_iterator(p, ec); !ec && it != fs::recursive_directory_iterator();
           it.increment(ec))
        if (it->is_regular_file() && it->path().extension() == ".story")
          files.push_back(it->path().string());
    } else if (fs::exists(p, ec)) {
      files.push_back(p.string());
    }
  };
  for (const auto& input : inputs) {
    if (input.find_first_of("*?[") != std::string::npos) {
      glob_t matches{};
      if (::glob(input.c_str(), 0, nullptr, &matches) == 0)
        for (std::size_t i = 0; i < matches.gl_pathc; ++i)
          add_path(matches.gl_pathv[i]);
      ::globfree(&matches);
    } else {
      add_path(input);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

/// Loads, parses and (depending on the mode) executes every input story.
///
/// Throws ConfigError when nothing can be run at all: no input files, a
/// dry-run without manifest, or run mode without a registry. Per-file
/// problems are collected in `RunReport::errors`.
inline RunReport run(const RunConfig& config, const StepRegistry* registry = nullptr) {
  auto pack = load_keyword_pack(config.language);
  std::optional<StepRegistry> manifest_registry;
  const StepRegistry* reg = registry;
  switch (config.mode) {
    case Mode::Run:
      if (!reg)
        fail_config("run mode needs a step registry");
      if (!reg->frozen())
        fail_config("step registry must be frozen before running");
      break;
    case Mode::DryRun:
      if (!config.manifest)
        fail_config("dry-run requires --manifest");
      manifest_registry = load_manifest(read_file(*config.manifest), *config.manifest);
      reg = &*manifest_registry;
      break;
    case Mode::Lint:
      reg = nullptr;
      break;
  }

  auto files = collect_inputs(config.inputs);
  if (files.empty())
    fail_config("no input files matched");

  RunReport report;
  for (const auto& file : files) {
    std::optional<Story> story;
    try {
      story = parse_story(read_file(file), pack, file);
    } catch (const ToolError& e) {
      report.errors.push_back({e.kind(), e.message(), e.loc()});
      continue;
    }
    if (story->scenarios.empty()) {
      report.errors.push_back({ErrorKind::ConfigError, "story '" + story->title + "' has no scenarios",
                               story->loc});
      continue;
    }
    StoryResult sr{*story, {}};
    bool stop = false;
    for (const auto& scenario : story->scenarios) {
      ScenarioResult result;
      switch (config.mode) {
        case Mode::Run: result = run_scenario(scenario, *reg); break;
        case Mode::DryRun: result = dry_run_scenario(scenario, *reg); break;
        case Mode::Lint: result = ScenarioResult{scenario, {}, Outcome::Passed}; break;
      }
      stop = config.stop_on_failure && result.outcome == Outcome::Failed;
      sr.scenarios.push_back(std::move(result));
      if (stop)
        break;
    }
    report.stories.push_back(std::move(sr));
    if (stop)
      break;
  }
  report.counters = recount(report.stories);
  return report;
}

/// 3 for load errors, otherwise 1 for any failed scenario, 2 for any
/// undefined one, 0 when everything passed.
inline int exit_code(const RunReport& report) {
  if (!report.errors.empty())
    return 3;
  const auto& c = report.counters;
  if (c.scenarios_failed > 0)
    return 1;
  if (c.scenarios_undefined > 0)
    return 2;
  return 0;
}

inline int exit_code(const ToolError&) { return 3; }

}  // namespace bddstack

#endif  // BDDSTACK_RUNNER_HPP
