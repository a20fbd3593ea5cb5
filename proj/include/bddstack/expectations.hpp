#ifndef BDDSTACK_EXPECTATIONS_HPP
#define BDDSTACK_EXPECTATIONS_HPP

#include <bddstack/error.hpp>
#include <bddstack/value.hpp>

#if defined(__GNUG__)
#include <cxxabi.h>
#endif

#include <concepts>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <typeinfo>
#include <utility>
#include <variant>
#include <vector>

namespace bddstack {

/// A zero-argument callable handed to `be_thrown_by`. `description` is what
/// failure messages print in place of the action.
struct DeferredAction {
  std::string description;
  std::function<void()> body;
};

/// One expected-side operand: a Value, or an action for `be_thrown_by`.
class Operand {
public:
  Operand(Value v) : data_(std::move(v)) {}
  Operand(DeferredAction a) : data_(std::move(a)) {}
  template <typename T>
    requires std::constructible_from<Value, T>
  Operand(T&& v) : data_(Value(std::forward<T>(v))) {}

  const Value* value() const noexcept { return std::get_if<Value>(&data_); }
  const DeferredAction* action() const noexcept { return std::get_if<DeferredAction>(&data_); }

  std::string render() const {
    if (auto v = value())
      return bddstack::render(*v);
    return action()->description;
  }

private:
  std::variant<Value, DeferredAction> data_;
};

using Operands = std::span<const Operand>;
using MatcherPredicate = std::function<bool(const Value& actual, Operands expected)>;

struct Arity {
  std::size_t count = 1;
  bool variadic = false;  // `count` is then a minimum

  static constexpr Arity exactly(std::size_t n) { return {n, false}; }
  static constexpr Arity at_least(std::size_t n) { return {n, true}; }

  bool accepts(std::size_t n) const noexcept { return variadic ? n >= count : n == count; }
};

/// A named predicate plus the message template rendered when it fails.
///
/// The template holds exactly three `%s` slots: the actual value, the
/// negation filler ("not " or ""), and the expected operands joined by ", ".
struct Matcher {
  std::string name;
  Arity arity;
  MatcherPredicate predicate;
  std::string message_template;
};

struct ExpectationOutcome {
  bool passed = true;
  std::string message;
};

namespace detail {

inline std::size_t count_slots(std::string_view tmpl) {
  std::size_t n = 0;
  for (auto pos = tmpl.find("%s"); pos != std::string_view::npos; pos = tmpl.find("%s", pos + 2))
    ++n;
  return n;
}

inline std::string fill_template(std::string_view tmpl, const std::string (&slots)[3]) {
  std::string out;
  std::size_t slot = 0, start = 0;
  for (auto pos = tmpl.find("%s"); pos != std::string_view::npos; pos = tmpl.find("%s", start)) {
    out.append(tmpl.substr(start, pos - start));
    out += slots[slot++];
    start = pos + 2;
  }
  out.append(tmpl.substr(start));
  return out;
}

inline std::string demangle(const char* name) {
#if defined(__GNUG__)
  int status = 0;
  std::unique_ptr<char, void (*)(void*)> out(abi::__cxa_demangle(name, nullptr, nullptr, &status),
                                             std::free);
  if (status == 0 && out)
    return out.get();
#endif
  return name;
}

inline std::optional<std::string> thrown_kind(const DeferredAction& action) {
  try {
    action.body();
  } catch (const Raised& e) {
    return e.kind();
  } catch (const ToolError& e) {
    return std::string(to_string(e.kind()));
  } catch (const std::exception& e) {
    return demangle(typeid(e).name());
  } catch (...) {
    return std::string("unknown");
  }
  return std::nullopt;
}

}  // namespace detail

class MatcherRegistry {
public:
  /// An empty registry. Most callers want `with_builtins()`.
  MatcherRegistry() = default;

  static MatcherRegistry with_builtins();

  void add(Matcher m) {
    if (frozen_)
      fail_config("matcher registry is frozen");
    if (m.name.empty())
      fail_config("matcher name is empty");
    if (matchers_.contains(m.name))
      fail_config("matcher '" + m.name + "' is already registered");
    if (auto slots = detail::count_slots(m.message_template); slots != 3)
      fail_config("template of matcher '" + m.name + "' has " + std::to_string(slots) +
                  " slots, expected 3");
    if (!m.predicate)
      fail_config("matcher '" + m.name + "' has no predicate");
    auto name = m.name;
    matchers_.emplace(std::move(name), std::move(m));
  }

  const Matcher& get(std::string_view name) const {
    auto it = matchers_.find(std::string(name));
    if (it == matchers_.end())
      fail_config("unknown matcher '" + std::string(name) + "'");
    return it->second;
  }

  bool contains(std::string_view name) const { return matchers_.contains(std::string(name)); }
  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

private:
  std::map<std::string, Matcher> matchers_;
  bool frozen_ = false;
};

inline void register_matcher(MatcherRegistry& reg, std::string name, Arity arity,
                             MatcherPredicate predicate, std::string message_template) {
  reg.add({std::move(name), arity, std::move(predicate), std::move(message_template)});
}

/// Adapts a predicate over plain Values; any action operand makes it false.
inline MatcherPredicate on_values(std::function<bool(const Value&, const std::vector<Value>&)> fn) {
  return [fn = std::move(fn)](const Value& actual, Operands expected) {
    std::vector<Value> values;
    for (const auto& op : expected) {
      if (!op.value())
        return false;
      values.push_back(*op.value());
    }
    return fn(actual, values);
  };
}

namespace detail {

inline ExpectationOutcome evaluate(const Value& actual, std::string_view matcher_name,
                                   Operands expected, const MatcherRegistry& reg, bool negated) {
  const auto& m = reg.get(matcher_name);
  if (!m.arity.accepts(expected.size()))
    fail_config("matcher '" + m.name + "' expects " + (m.arity.variadic ? "at least " : "") +
                std::to_string(m.arity.count) + " operand(s), got " + std::to_string(expected.size()));
  bool holds = m.predicate(actual, expected);
  if (holds != negated)
    return {true, {}};
  std::string joined;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i)
      joined += ", ";
    joined += expected[i].render();
  }
  // The filler describes what actually happened.
  const std::string slots[3] = {render(actual), negated ? "" : "not ", joined};
  return {false, fill_template(m.message_template, slots)};
}

}  // namespace detail

inline ExpectationOutcome should(const Value& actual, std::string_view matcher_name,
                                 Operands expected, const MatcherRegistry& reg) {
  return detail::evaluate(actual, matcher_name, expected, reg, false);
}

inline ExpectationOutcome should(const Value& actual, std::string_view matcher_name,
                                 std::initializer_list<Operand> expected, const MatcherRegistry& reg) {
  return should(actual, matcher_name, Operands(expected.begin(), expected.size()), reg);
}

inline ExpectationOutcome should_not(const Value& actual, std::string_view matcher_name,
                                     Operands expected, const MatcherRegistry& reg) {
  return detail::evaluate(actual, matcher_name, expected, reg, true);
}

inline ExpectationOutcome should_not(const Value& actual, std::string_view matcher_name,
                                     std::initializer_list<Operand> expected,
                                     const MatcherRegistry& reg) {
  return should_not(actual, matcher_name, Operands(expected.begin(), expected.size()), reg);
}

/// Turns a failed outcome into the ExpectationFailure a step handler throws.
inline void require(const ExpectationOutcome& outcome) {
  if (!outcome.passed)
    throw ToolError(ErrorKind::ExpectationFailure, outcome.message);
}

namespace matchers {

inline bool equal_to(const Value& actual, Operands expected) {
  return expected[0].value() && value_eq(actual, *expected[0].value());
}

inline bool be_into(const Value& actual, Operands expected) {
  const Value* container = expected[0].value();
  if (!container)
    return false;
  if (auto items = container->if_seq()) {
    for (const auto& item : *items)
      if (value_eq(item, actual))
        return true;
    return false;
  }
  if (auto haystack = container->if_text())
    if (auto needle = actual.if_text())
      return haystack->find(*needle) != std::string::npos;
  return false;
}

inline bool have_all_of(const Value& actual, Operands expected) {
  auto items = actual.if_seq();
  if (!items)
    return false;
  for (const auto& want : expected) {
    if (!want.value())
      return false;
    bool found = false;
    for (const auto& item : *items)
      if (value_eq(item, *want.value())) {
        found = true;
        break;
      }
    if (!found)
      return false;
  }
  return true;
}

inline bool be_thrown_by(const Value& actual, Operands expected) {
  auto action = expected[0].action();
  if (!action)
    return false;
  auto kind = detail::thrown_kind(*action);
  auto name = actual.if_text();
  return kind && name && *kind == *name;
}

}  // namespace matchers

inline MatcherRegistry MatcherRegistry::with_builtins() {
  MatcherRegistry reg;
  register_matcher(reg, "equal_to", Arity::exactly(1), matchers::equal_to, "%s is %sequal to %s");
  register_matcher(reg, "be_into", Arity::exactly(1), matchers::be_into, "%s is %sinto %s");
  register_matcher(reg, "have_all_of", Arity::at_least(1), matchers::have_all_of,
                   "%s does %shave all of %s");
  register_matcher(reg, "be_thrown_by", Arity::exactly(1), matchers::be_thrown_by,
                   "%s is %sthrown by %s");
  return reg;
}

/// Operator-piping surface: `Value(100) | should | equal_to(100);`
///
/// Evaluates against `default_matchers()` and throws ExpectationFailure on
/// failure, which the runner reports as a Failed step.
namespace fluent {

inline MatcherRegistry& default_matchers() {
  static MatcherRegistry reg = MatcherRegistry::with_builtins();
  return reg;
}

struct ShouldTag {};
struct ShouldNotTag {};
inline constexpr ShouldTag should{};
inline constexpr ShouldNotTag should_not{};

struct Pending {
  Value actual;
  bool negated;
};

struct MatcherCall {
  std::string name;
  std::vector<Operand> operands;
};

template <typename T>
  requires std::constructible_from<Value, T>
Pending operator|(T&& actual, ShouldTag) {
  return {Value(std::forward<T>(actual)), false};
}

template <typename T>
  requires std::constructible_from<Value, T>
Pending operator|(T&& actual, ShouldNotTag) {
  return {Value(std::forward<T>(actual)), true};
}

inline void operator|(const Pending& pending, const MatcherCall& call) {
  Operands ops(call.operands.data(), call.operands.size());
  require(pending.negated ? bddstack::should_not(pending.actual, call.name, ops, default_matchers())
                          : bddstack::should(pending.actual, call.name, ops, default_matchers()));
}

template <typename... Args>
MatcherCall matcher(std::string name, Args&&... operands) {
  return {std::move(name), {Operand(std::forward<Args>(operands))...}};
}

inline MatcherCall equal_to(Value v) { return matcher("equal_to", std::move(v)); }
inline MatcherCall be_into(Value v) { return matcher("be_into", std::move(v)); }
template <typename... Args>
MatcherCall have_all_of(Args&&... items) {
  return matcher("have_all_of", std::forward<Args>(items)...);
}
inline MatcherCall be_thrown_by(DeferredAction action) { return matcher("be_thrown_by", std::move(action)); }

}  // namespace fluent

}  // namespace bddstack

#endif  // BDDSTACK_EXPECTATIONS_HPP
