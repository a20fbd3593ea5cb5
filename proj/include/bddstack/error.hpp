#ifndef BDDSTACK_ERROR_HPP
#define BDDSTACK_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace bddstack {

/// A position in a story or manifest file. Lines are 1-based.
struct SourceLoc {
  std::string file;
  std::size_t line = 1;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

inline std::string to_string(const SourceLoc& loc) {
  return loc.file + ":" + std::to_string(loc.line);
}

enum class ErrorKind {
  ParseError,
  DuplicateStep,
  AmbiguousStep,
  UndefinedStep,
  ExpectationFailure,
  DoubleFailure,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateStep: return "DuplicateStep";
    case ErrorKind::AmbiguousStep: return "AmbiguousStep";
    case ErrorKind::UndefinedStep: return "UndefinedStep";
    case ErrorKind::ExpectationFailure: return "ExpectationFailure";
    case ErrorKind::DoubleFailure: return "DoubleFailure";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "ConfigError";
}

/// The single error type thrown by every bddstack module.
///
/// `what()` carries the bare message; the location, when present, is kept
/// separately so reporters can format it as they see fit.
class ToolError : public std::runtime_error {
public:
  ToolError(ErrorKind kind, std::string message,
            std::optional<SourceLoc> loc = std::nullopt)
      : std::runtime_error(message.empty() ? std::string(to_string(kind))
                                           : std::move(message)),
        kind_(kind),
        loc_(std::move(loc)) {
    if (kind_ == ErrorKind::ParseError && !loc_)
      loc_ = SourceLoc{};
  }

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceLoc>& loc() const noexcept { return loc_; }
  std::string message() const { return what(); }

private:
  ErrorKind kind_;
  std::optional<SourceLoc> loc_;
};

[[noreturn]] inline void fail_config(std::string message) {
  throw ToolError(ErrorKind::ConfigError, std::move(message));
}

[[noreturn]] inline void fail_parse(std::string message, SourceLoc loc) {
  throw ToolError(ErrorKind::ParseError, std::move(message), std::move(loc));
}

/// An error of a user-named kind, e.g. "InvalidNumericalOperation".
///
/// Doubles deliver programmed `Raise` responses with it and `be_thrown_by`
/// compares its kind against the expected name.
class Raised : public std::runtime_error {
public:
  Raised(std::string kind, std::string message)
      : std::runtime_error(message.empty() ? kind : message),
        kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

}  // namespace bddstack

#endif  // BDDSTACK_ERROR_HPP
