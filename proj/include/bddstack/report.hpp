#ifndef BDDSTACK_REPORT_HPP
#define BDDSTACK_REPORT_HPP

#include <bddstack/keywords.hpp>
#include <bddstack/runner.hpp>

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

namespace bddstack {

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string step_keyword(const Step& step, std::string_view language) {
  auto pack = load_keyword_pack(language == "pt" ? "pt" : "en");
  return step.continuation ? pack.and_.front() : pack.step_keywords(step.kind).front();
}

// `label (first clause, other non-zero clauses...)`; the first clause is
// always printed, even when zero.
inline std::string summary_line(std::size_t total, std::string_view label,
                                const std::vector<std::pair<std::size_t, std::string_view>>& clauses) {
  std::string out = std::to_string(total) + " " + std::string(label) + " (";
  bool first = true;
  for (const auto& [count, name] : clauses) {
    if (!first && count == 0)
      continue;
    if (!first)
      out += ", ";
    out += std::to_string(count) + " " + std::string(name);
    first = false;
  }
  return out + ")";
}

}  // namespace detail

inline std::string summary_lines(const Counters& c) {
  return detail::summary_line(c.scenarios(), "scenarios",
                              {{c.scenarios_passed, "passed"},
                               {c.scenarios_failed, "failed"},
                               {c.scenarios_undefined, "undefined"}}) +
         "\n" +
         detail::summary_line(c.steps(), "steps",
                              {{c.steps_passed, "passed"},
                               {c.steps_failed, "failed"},
                               {c.steps_errored, "errored"},
                               {c.steps_undefined, "undefined"},
                               {c.steps_ambiguous, "ambiguous"},
                               {c.steps_skipped, "skipped"}}) +
         "\n";
}

/// Plain-text report. Durations are left out so the output is byte-stable
/// across runs.
inline std::string format_plain(const RunReport& report) {
  std::string out;
  for (const auto& err : report.errors) {
    if (err.loc)
      out += to_string(*err.loc) + ": ";
    out += std::string(to_string(err.kind)) + ": " + err.message + "\n";
  }
  for (const auto& story : report.stories) {
    out += "Story: " + story.story.title + "\n";
    for (const auto& sc : story.scenarios) {
      out += "  Scenario: " + sc.scenario.title + " ... " + detail::upper(to_string(sc.outcome)) + "\n";
      for (const auto& st : sc.steps) {
        if (st.status == StepStatus::Passed)
          continue;
        out += "    " + detail::step_keyword(st.step, story.story.language) + " " + st.step.text +
               " ... " + detail::upper(to_string(st.status));
        if (!st.message.empty())
          out += ": " + st.message;
        out += "\n";
      }
    }
  }
  return out + summary_lines(report.counters);
}

namespace detail {

inline nlohmann::json loc_json(const std::optional<SourceLoc>& loc) {
  if (!loc)
    return nullptr;
  return {{"file", loc->file}, {"line", loc->line}};
}

}  // namespace detail

inline nlohmann::json report_json(const RunReport& report) {
  using nlohmann::json;
  json stories = json::array();
  for (const auto& story : report.stories) {
    json scenarios = json::array();
    for (const auto& sc : story.scenarios) {
      json steps = json::array();
      for (const auto& st : sc.steps)
        steps.push_back({{"step",
                          {{"kind", to_string(st.step.kind)},
                           {"text", st.step.text},
                           {"loc", detail::loc_json(st.step.loc)},
                           {"continuation", st.step.continuation}}},
                         {"status", to_string(st.status)},
                         {"message", st.message},
                         {"duration", st.duration_ms}});
      scenarios.push_back({{"scenario",
                            {{"ordinal", sc.scenario.ordinal ? json(*sc.scenario.ordinal) : json(nullptr)},
                             {"title", sc.scenario.title},
                             {"loc", detail::loc_json(sc.scenario.loc)}}},
                           {"steps", std::move(steps)},
                           {"outcome", to_string(sc.outcome)}});
    }
    stories.push_back({{"story",
                        {{"title", story.story.title},
                         {"narrative", story.story.narrative},
                         {"language", story.story.language},
                         {"loc", detail::loc_json(story.story.loc)}}},
                       {"scenarios", std::move(scenarios)}});
  }
  json errors = json::array();
  for (const auto& err : report.errors)
    errors.push_back({{"kind", to_string(err.kind)}, {"message", err.message}, {"loc", detail::loc_json(err.loc)}});
  const auto& c = report.counters;
  return {{"stories", std::move(stories)},
          {"errors", std::move(errors)},
          {"counters",
           {{"scenarios_passed", c.scenarios_passed},
            {"scenarios_failed", c.scenarios_failed},
            {"scenarios_undefined", c.scenarios_undefined},
            {"steps_passed", c.steps_passed},
            {"steps_failed", c.steps_failed},
            {"steps_errored", c.steps_errored},
            {"steps_undefined", c.steps_undefined},
            {"steps_ambiguous", c.steps_ambiguous},
            {"steps_skipped", c.steps_skipped}}},
          {"exit_code", exit_code(report)}};
}

inline std::string format_report(const RunReport& report, Format format) {
  if (format == Format::Json)
    return report_json(report).dump(2) + "\n";
  return format_plain(report);
}

}  // namespace bddstack

#endif  // BDDSTACK_REPORT_HPP
