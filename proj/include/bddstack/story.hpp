#ifndef BDDSTACK_STORY_HPP
#define BDDSTACK_STORY_HPP

#include <bddstack/error.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bddstack {

enum class StepKind { Given, When, Then };

constexpr std::string_view to_string(StepKind kind) noexcept {
  switch (kind) {
    case StepKind::Given: return "Given";
    case StepKind::When: return "When";
    case StepKind::Then: return "Then";
  }
  return "Given";
}

/// One line of a scenario. `continuation` marks a step written with the
/// And-keyword; its kind is inherited from the step before it.
struct Step {
  StepKind kind = StepKind::Given;
  std::string text;
  SourceLoc loc;
  bool continuation = false;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Scenario {
  std::optional<unsigned> ordinal;
  std::string title;
  std::vector<Step> steps;
  SourceLoc loc;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Story {
  std::string title;
  std::vector<std::string> narrative;
  std::vector<Scenario> scenarios;
  std::string language = "en";
  SourceLoc loc;

  friend bool operator==(const Story&, const Story&) = default;
};

}  // namespace bddstack

#endif  // BDDSTACK_STORY_HPP
