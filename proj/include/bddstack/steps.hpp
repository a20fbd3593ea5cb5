#ifndef BDDSTACK_STEPS_HPP
#define BDDSTACK_STEPS_HPP

#include <bddstack/error.hpp>
#include <bddstack/parser.hpp>
#include <bddstack/story.hpp>
#include <bddstack/value.hpp>

#include <any>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bddstack {

/// Trims the ends and collapses internal whitespace runs to one space.
inline std::string normalize(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (detail::is_blank(c) || c == '\n') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space)
      out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Placeholder {
  std::string name;
  friend bool operator==(const Placeholder&, const Placeholder&) = default;
};

using PatternToken = std::variant<Literal, Placeholder>;

/// A step pattern: normalized text where `{name}` marks a captured run.
class StepPattern {
public:
  explicit StepPattern(std::string_view raw) : raw_(normalize(raw)) {
    if (raw_.empty())
      fail_config("step pattern is empty");
    tokenize();
  }

  const std::string& raw() const noexcept { return raw_; }
  const std::vector<PatternToken>& tokens() const noexcept { return tokens_; }

  std::size_t placeholder_count() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tokens_)
      n += std::holds_alternative<Placeholder>(t);
    return n;
  }

  bool exact() const noexcept { return placeholder_count() == 0; }

  /// Aligns the pattern against already-normalized text.
  std::optional<std::map<std::string, std::string>> match(std::string_view text) const {
    std::map<std::string, std::string> captures;
    if (!match_from(0, text, captures))
      return std::nullopt;
    return captures;
  }

private:
  static bool is_ident(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
      return false;
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        return false;
    return true;
  }

  void tokenize() {
    std::string literal;
    std::size_t i = 0;
    while (i < raw_.size()) {
      if (raw_[i] == '{') {
        auto close = raw_.find('}', i + 1);
        if (close != std::string::npos) {
          auto name = std::string_view(raw_).substr(i + 1, close - i - 1);
          if (is_ident(name)) {
            if (!literal.empty()) {
              tokens_.push_back(Literal{std::move(literal)});
              literal.clear();
            } else if (!tokens_.empty()) {
              fail_config("placeholders must be separated by literal text in '" + raw_ + "'");
            }
            for (const auto& t : tokens_)
              if (auto p = std::get_if<Placeholder>(&t); p && p->name == name)
                fail_config("placeholder '{" + std::string(name) + "}' repeated in '" + raw_ + "'");
            tokens_.push_back(Placeholder{std::string(name)});
            i = close + 1;
            continue;
          }
        }
      }
      literal.push_back(raw_[i++]);
    }
    if (!literal.empty())
      tokens_.push_back(Literal{std::move(literal)});
  }

  static std::string unquote(std::string_view run) {
    if (run.size() >= 2 && run.front() == '"' && run.back() == '"')
      run = run.substr(1, run.size() - 2);
    return std::string(run);
  }

  // Placeholders are never adjacent, so each one is followed by a literal or
  // by the end of the text. Longest captures are tried first.
  bool match_from(std::size_t index, std::string_view text,
                  std::map<std::string, std::string>& captures) const {
    if (index == tokens_.size())
      return text.empty();
    if (auto lit = std::get_if<Literal>(&tokens_[index])) {
      if (!text.starts_with(lit->text))
        return false;
      return match_from(index + 1, text.substr(lit->text.size()), captures);
    }
    const auto& name = std::get<Placeholder>(tokens_[index]).name;
    if (index + 1 == tokens_.size()) {
      if (text.empty())
        return false;
      captures[name] = unquote(text);
      return true;
    }
    const auto& next = std::get<Literal>(tokens_[index + 1]).text;
    for (auto pos = text.rfind(next); pos != std::string_view::npos && pos > 0;
         pos = text.rfind(next, pos - 1)) {
      if (match_from(index + 1, text.substr(pos), captures)) {
        captures[name] = unquote(text.substr(0, pos));
        return true;
      }
    }
    return false;
  }

  std::string raw_;
  std::vector<PatternToken> tokens_;
};

/// Per-scenario state handed to every step handler. A fresh one is built for
/// each scenario.
struct ScenarioContext {
  std::map<std::string, Value> bindings;
  std::any host;
};

using Captures = std::map<std::string, std::string>;

/// Handlers signal a wrong outcome by throwing a ToolError of kind
/// ExpectationFailure; any other exception marks the step as errored.
using StepHandler = std::function<void(ScenarioContext&, const Captures&)>;

struct StepDefinition {
  StepKind kind;
  StepPattern pattern;
  StepHandler handler;
  std::optional<SourceLoc> origin;
};

struct Matched {
  const StepDefinition* definition;
  Captures captures;
};

struct Undefined {};

struct Ambiguous {
  std::vector<const StepDefinition*> candidates;
};

using MatchResult = std::variant<Matched, Undefined, Ambiguous>;

class StepRegistry {
public:
  StepRegistry() = default;
  StepRegistry(const StepRegistry&) = delete;
  StepRegistry& operator=(const StepRegistry&) = delete;
  StepRegistry(StepRegistry&&) = default;
  StepRegistry& operator=(StepRegistry&&) = default;

  void add(StepKind kind, std::string_view pattern_text, StepHandler handler,
           std::optional<SourceLoc> origin = std::nullopt) {
    if (frozen_)
      fail_config("step registry is frozen");
    StepPattern pattern(pattern_text);
    for (const auto& def : definitions_)
      if (def->kind == kind && def->pattern.raw() == pattern.raw())
        throw ToolError(ErrorKind::DuplicateStep,
                        std::string(to_string(kind)) + " step '" + pattern.raw() +
                            "' is already defined",
                        origin);
    definitions_.push_back(std::make_unique<StepDefinition>(
        StepDefinition{kind, std::move(pattern), std::move(handler), std::move(origin)}));
  }

  void given(std::string_view pattern, StepHandler h) { add(StepKind::Given, pattern, std::move(h)); }
  void when(std::string_view pattern, StepHandler h) { add(StepKind::When, pattern, std::move(h)); }
  void then(std::string_view pattern, StepHandler h) { add(StepKind::Then, pattern, std::move(h)); }

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }
  std::size_t size() const noexcept { return definitions_.size(); }

  /// Binds a parsed step to its definition. Exact patterns outrank
  /// placeholder patterns; several matches at the same rank are Ambiguous.
  MatchResult resolve(const Step& step) const {
    if (!frozen_)
      fail_config("step registry must be frozen before resolving steps");
    auto text = normalize(step.text);
    std::vector<Matched> exact, parameterized;
    for (const auto& def : definitions_) {
      if (def->kind != step.kind)
        continue;
      if (auto captures = def->pattern.match(text))
        (def->pattern.exact() ? exact : parameterized).push_back({def.get(), std::move(*captures)});
    }
    for (auto* tier : {&exact, &parameterized}) {
      if (tier->size() == 1)
        return std::move(tier->front());
      if (tier->size() > 1) {
        Ambiguous amb;
        for (const auto& m : *tier)
          amb.candidates.push_back(m.definition);
        return amb;
      }
    }
    return Undefined{};
  }

private:
  std::vector<std::unique_ptr<StepDefinition>> definitions_;
  bool frozen_ = false;
};

inline void register_step(StepRegistry& reg, StepKind kind, std::string_view pattern,
                          StepHandler handler) {
  reg.add(kind, pattern, std::move(handler));
}

inline MatchResult resolve(const StepRegistry& reg, const Step& step) { return reg.resolve(step); }

/// Reads a step manifest (`given: <pattern>` per line, `#` comments) into a
/// frozen registry whose handlers do nothing.
inline StepRegistry load_manifest(std::string_view text, std::string_view file) {
  StepRegistry reg;
  std::size_t line = 1;
  while (true) {
    auto nl = text.find('\n');
    auto content = detail::trim(text.substr(0, nl));
    if (!content.empty() && content.front() != '#') {
      auto colon = content.find(':');
      auto key = colon == std::string_view::npos ? content : content.substr(0, colon);
      std::optional<StepKind> kind;
      if (key == "given") kind = StepKind::Given;
      else if (key == "when") kind = StepKind::When;
      else if (key == "then") kind = StepKind::Then;
      SourceLoc loc{std::string(file), line};
      if (!kind || colon == std::string_view::npos)
        fail_parse("expected 'given:', 'when:' or 'then:'", loc);
      auto pattern = detail::trim(content.substr(colon + 1));
      if (pattern.empty())
        fail_parse("empty step pattern", loc);
      try {
        reg.add(*kind, pattern, [](ScenarioContext&, const Captures&) {}, loc);
      } catch (const ToolError& e) {
        if (e.kind() == ErrorKind::ConfigError)
          fail_parse(e.message(), loc);
        throw;
      }
    }
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
    ++line;
  }
  reg.freeze();
  return reg;
}

}  // namespace bddstack

#endif  // BDDSTACK_STEPS_HPP
