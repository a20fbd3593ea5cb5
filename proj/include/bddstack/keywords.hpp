#ifndef BDDSTACK_KEYWORDS_HPP
#define BDDSTACK_KEYWORDS_HPP

#include <bddstack/error.hpp>
#include <bddstack/story.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace bddstack {

/// Keyword spellings for one language. The first spelling of every list is
/// the one pretty_print emits; the others are accepted on input.
struct KeywordPack {
  std::string language;
  std::vector<std::string> story;
  std::vector<std::string> scenario;
  std::vector<std::string> given;
  std::vector<std::string> when;
  std::vector<std::string> then;
  std::vector<std::string> and_;

  const std::vector<std::string>& step_keywords(StepKind kind) const {
    switch (kind) {
      case StepKind::Given: return given;
      case StepKind::When: return when;
      case StepKind::Then: return then;
    }
    return given;
  }

  std::vector<std::string> all() const {
    std::vector<std::string> out;
    for (const auto* list : {&story, &scenario, &given, &when, &then, &and_})
      out.insert(out.end(), list->begin(), list->end());
    return out;
  }
};

/// Checks that every keyword is non-empty and that no two keywords can
/// claim the same line. Keywords are always followed by ':' or whitespace,
/// so "E" and "Entao" coexist, but "Given" and "Given that" would not.
inline void validate_keyword_pack(const KeywordPack& pack) {
  auto words = pack.all();
  for (const auto* list : {&pack.story, &pack.scenario, &pack.given, &pack.when,
                           &pack.then, &pack.and_})
    if (list->empty())
      fail_config("keyword pack '" + pack.language + "' has an empty keyword list");
  for (const auto& w : words) {
    if (w.empty() || w.find_first_of(" \t:") != std::string::npos)
      fail_config("keyword pack '" + pack.language + "' has an invalid keyword '" + w + "'");
  }
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j)
      if (i != j && words[i] == words[j])
        fail_config("keyword pack '" + pack.language + "' repeats keyword '" + words[i] + "'");
}

inline KeywordPack load_keyword_pack(std::string_view code) {
  KeywordPack pack;
  if (code == "en") {
    pack = {"en", {"Story"}, {"Scenario"}, {"Given"}, {"When"}, {"Then"}, {"And"}};
  } else if (code == "pt") {
    pack = {"pt",
            {"História", "Historia"},
            {"Cenário", "Cenario"},
            {"Dado", "Dada"},
            {"Quando"},
            {"Então", "Entao"},
            {"E"}};
  } else {
    fail_config("unknown language '" + std::string(code) + "' (expected en or pt)");
  }
  validate_keyword_pack(pack);
  return pack;
}

}  // namespace bddstack

#endif  // BDDSTACK_KEYWORDS_HPP
