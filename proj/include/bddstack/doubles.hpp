#ifndef BDDSTACK_DOUBLES_HPP
#define BDDSTACK_DOUBLES_HPP

#include <bddstack/error.hpp>
#include <bddstack/value.hpp>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bddstack {

enum class DoubleMode { Mock, Stub };
enum class Phase { Programming, Replay };

struct Return {
  Value value;
  friend bool operator==(const Return&, const Return&) = default;
};

struct Raise {
  std::string kind;
  std::string message;
  friend bool operator==(const Raise&, const Raise&) = default;
};

using Response = std::variant<Return, Raise>;

/// One programmed (method, args) key. Each programming statement for the key
/// appends a response; invocation N receives response N.
struct ProgrammedCall {
  std::string method;
  std::vector<Value> args;
  std::vector<Response> responses;
  std::size_t times_invoked = 0;

  std::size_t times_programmed() const noexcept { return responses.size(); }
  std::size_t remaining() const noexcept {
    return times_invoked < responses.size() ? responses.size() - times_invoked : 0;
  }
};

struct Call {
  std::string method;
  std::vector<Value> args;
  friend bool operator==(const Call&, const Call&) = default;
};

inline std::string to_string(const Call& call) {
  return call.method + "(" + render_args(call.args) + ")";
}

enum class CallOutcome { Programmed, Defaulted, Unexpected };

struct LogEntry {
  Call call;
  CallOutcome outcome;
};

struct UnmetCall {
  Call call;
  std::size_t remaining;
  friend bool operator==(const UnmetCall&, const UnmetCall&) = default;
};

struct VerificationReport {
  bool passed = true;
  std::vector<UnmetCall> unmet;
  std::vector<Call> unexpected;

  std::string describe() const {
    std::string out;
    for (const auto& u : unmet)
      out += (out.empty() ? "" : "; ") + std::string("expected ") + to_string(u.call) + " " +
             std::to_string(u.remaining) + " more time(s)";
    for (const auto& c : unexpected)
      out += (out.empty() ? "" : "; ") + std::string("unexpected ") + to_string(c);
    return out;
  }
};

/// A mock or stub with a one-way Programming -> Replay lifecycle.
///
/// Mocks are strict: every programmed call must be consumed, and a call that
/// was not programmed (or is exhausted) throws DoubleFailure on the spot.
/// Stubs answer programmed calls any number of times and return
/// `stub_default` for everything else; they never fail.
class Double {
public:
  explicit Double(DoubleMode mode, std::string name = {}) : mode_(mode), name_(std::move(name)) {}

  DoubleMode mode() const noexcept { return mode_; }
  Phase phase() const noexcept { return phase_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<ProgrammedCall>& programmed() const noexcept { return programmed_; }
  const std::vector<LogEntry>& log() const noexcept { return log_; }
  const std::vector<Call>& unexpected() const noexcept { return unexpected_; }

  void program_call(std::string method, std::vector<Value> args, Response response) {
    require_phase(Phase::Programming, "program " + method + "(" + render_args(args) + ")");
    if (auto raise = std::get_if<Raise>(&response); raise && raise->kind.empty())
      fail_config("Raise response needs an error kind");
    if (auto* existing = find(method, args)) {
      existing->responses.push_back(std::move(response));
      return;
    }
    programmed_.push_back({std::move(method), std::move(args), {std::move(response)}, 0});
  }

  void set_stub_default(Response response) {
    require_phase(Phase::Programming, "set the stub default");
    stub_default_ = std::move(response);
  }

  void end_programming() {
    require_phase(Phase::Programming, "end programming");
    phase_ = Phase::Replay;
  }

  Value invoke(std::string method, std::vector<Value> args) {
    require_phase(Phase::Replay, "invoke " + method + "(" + render_args(args) + ")");
    Call call{std::move(method), std::move(args)};
    auto* entry = find(call.method, call.args);
    if (mode_ == DoubleMode::Stub) {
      if (!entry) {
        log_.push_back({std::move(call), CallOutcome::Defaulted});
        return deliver(stub_default_);
      }
      auto index = std::min(entry->times_invoked, entry->responses.size() - 1);
      ++entry->times_invoked;
      log_.push_back({std::move(call), CallOutcome::Programmed});
      return deliver(entry->responses[index]);
    }
    if (!entry || entry->remaining() == 0) {
      std::string message = "unexpected call " + to_string(call) + describe_self() + near_misses(call);
      unexpected_.push_back(call);
      log_.push_back({std::move(call), CallOutcome::Unexpected});
      throw ToolError(ErrorKind::DoubleFailure, std::move(message));
    }
    const auto& response = entry->responses[entry->times_invoked++];
    log_.push_back({std::move(call), CallOutcome::Programmed});
    return deliver(response);
  }

  VerificationReport verify() const {
    require_phase(Phase::Replay, "verify");
    VerificationReport report;
    if (mode_ == DoubleMode::Stub)
      return report;
    for (const auto& pc : programmed_)
      if (pc.remaining() > 0)
        report.unmet.push_back({{pc.method, pc.args}, pc.remaining()});
    report.unexpected = unexpected_;
    report.passed = report.unmet.empty() && report.unexpected.empty();
    return report;
  }

private:
  void require_phase(Phase wanted, const std::string& what) const {
    if (phase_ != wanted)
      throw ToolError(ErrorKind::DoubleFailure,
                      "cannot " + what + describe_self() +
                          (phase_ == Phase::Replay ? ": programming has ended"
                                                   : ": still programming"));
  }

  std::string describe_self() const {
    std::string kind = mode_ == DoubleMode::Mock ? "mock" : "stub";
    return name_.empty() ? " on " + kind : " on " + kind + " '" + name_ + "'";
  }

  // Matching goes through canonical_encode so that it is exactly value_eq.
  ProgrammedCall* find(const std::string& method, const std::vector<Value>& args) {
    for (auto& pc : programmed_) {
      if (pc.method != method || pc.args.size() != args.size())
        continue;
      bool same = true;
      for (std::size_t i = 0; same && i < args.size(); ++i)
        same = canonical_encode(pc.args[i]) == canonical_encode(args[i]);
      if (same)
        return &pc;
    }
    return nullptr;
  }

  std::string near_misses(const Call& call) const {
    std::string out;
    for (const auto& pc : programmed_)
      if (pc.method == call.method)
        out += (out.empty() ? "; programmed: " : ", ") + to_string(Call{pc.method, pc.args}) + " [" +
               std::to_string(pc.times_invoked) + "/" + std::to_string(pc.times_programmed()) +
               " invoked]";
    if (out.empty())
      out = "; no calls to '" + call.method + "' were programmed";
    return out;
  }

  static Value deliver(const Response& response) {
    if (auto raise = std::get_if<Raise>(&response))
      throw Raised(raise->kind, raise->message);
    return std::get<Return>(response).value;
  }

  DoubleMode mode_;
  std::string name_;
  Phase phase_ = Phase::Programming;
  std::vector<ProgrammedCall> programmed_;
  std::vector<LogEntry> log_;
  std::vector<Call> unexpected_;
  Response stub_default_ = Return{Value()};
};

inline Double make_mock(std::string name = {}) { return Double(DoubleMode::Mock, std::move(name)); }
inline Double make_stub(std::string name = {}) { return Double(DoubleMode::Stub, std::move(name)); }

inline void program_call(Double& d, std::string method, std::vector<Value> args, Response response) {
  d.program_call(std::move(method), std::move(args), std::move(response));
}
inline void end_programming(Double& d) { d.end_programming(); }
inline Value invoke(Double& d, std::string method, std::vector<Value> args) {
  return d.invoke(std::move(method), std::move(args));
}
inline VerificationReport verify(const Double& d) { return d.verify(); }

/// Throws DoubleFailure describing what a failed verification missed.
inline void require_verified(const Double& d) {
  auto report = d.verify();
  if (!report.passed)
    throw ToolError(ErrorKind::DoubleFailure,
                    (d.name().empty() ? std::string("mock") : "mock '" + d.name() + "'") +
                        " not satisfied: " + report.describe());
}

/// `mock.expect("debit", {100}) >> Value()` programs debit(100) -> null.
/// `<<` is accepted as the same statement.
struct ProgrammingStatement {
  Double* target;
  std::string method;
  std::vector<Value> args;
};

inline ProgrammingStatement expect(Double& d, std::string method, std::vector<Value> args = {}) {
  return {&d, std::move(method), std::move(args)};
}

inline void operator>>(ProgrammingStatement st, Response response) {
  st.target->program_call(std::move(st.method), std::move(st.args), std::move(response));
}
inline void operator>>(ProgrammingStatement st, Value value) {
  std::move(st) >> Response(Return{std::move(value)});
}
inline void operator<<(ProgrammingStatement st, Response response) {
  std::move(st) >> std::move(response);
}
inline void operator<<(ProgrammingStatement st, Value value) {
  std::move(st) >> Response(Return{std::move(value)});
}

/// Scope guard for the programming phase; leaving the scope starts replay.
class Programming {
public:
  explicit Programming(Double& d) : target_(d) {}
  Programming(const Programming&) = delete;
  Programming& operator=(const Programming&) = delete;
  ~Programming() {
    if (target_.phase() == Phase::Programming)
      target_.end_programming();
  }

private:
  Double& target_;
};

}  // namespace bddstack

#endif  // BDDSTACK_DOUBLES_HPP
