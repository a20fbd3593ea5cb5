#include <bddstack/doubles.hpp>

#include <support/generators.hpp>

#include <gtest/gtest.h>

using namespace bddstack;

namespace {

void transfer(Double& source, Double& destination, int value) {
  source.invoke("debit", {value});
  destination.invoke("credit", {value});
}

ErrorKind error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ToolError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ToolError";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(Mock, TransferScenario) {
  auto source = make_mock("source_account");
  auto destination = make_mock("destination_account");
  {
    Programming with(source);
    expect(source, "debit", {100}) >> Value();
  }
  {
    Programming with(destination);
    expect(destination, "credit", {100}) << Value();
  }
  EXPECT_EQ(source.phase(), Phase::Replay);
  transfer(source, destination, 100);
  EXPECT_TRUE(source.verify().passed);
  EXPECT_TRUE(destination.verify().passed);
}

TEST(Mock, UnmetCallFailsVerification) {
  auto d = make_mock();
  d.program_call("debit", {100}, Return{Value()});
  d.end_programming();
  auto report = d.verify();
  EXPECT_FALSE(report.passed);
  ASSERT_EQ(report.unmet.size(), 1u);
  EXPECT_EQ(report.unmet[0], (UnmetCall{{"debit", {100}}, 1}));
  EXPECT_THROW(require_verified(d), ToolError);
}

TEST(Mock, UnexpectedCallFailsImmediately) {
  auto d = make_mock("source_account");
  d.program_call("debit", {100}, Return{Value()});
  d.end_programming();
  try {
    d.invoke("debit", {50});
    FAIL();
  } catch (const ToolError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DoubleFailure);
    std::string msg = e.what();
    EXPECT_NE(msg.find("debit(50)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("debit(100)"), std::string::npos) << msg;
  }
  auto report = d.verify();
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.unexpected, (std::vector<Call>{{"debit", {50}}}));
}

TEST(Mock, RepeatProgrammingCountsAndQueuesResponses) {
  auto d = make_mock();
  d.program_call("debit", {100}, Return{Value()});
  d.program_call("debit", {100}, Return{Value()});
  ASSERT_EQ(d.programmed().size(), 1u);
  EXPECT_EQ(d.programmed()[0].times_programmed(), 2u);

  auto q = make_mock();
  q.program_call("next", {}, Return{Value(1)});
  q.program_call("next", {}, Return{Value(2)});
  q.program_call("next", {}, Raise{"Empty", "no more"});
  q.end_programming();
  EXPECT_EQ(q.invoke("next", {}), Value(1));
  EXPECT_EQ(q.invoke("next", {}), Value(2));
  try {
    q.invoke("next", {});
    FAIL();
  } catch (const Raised& e) {
    EXPECT_EQ(e.kind(), "Empty");
  }
  EXPECT_EQ(error_kind([&] { q.invoke("next", {}); }), ErrorKind::DoubleFailure);
}

TEST(Mock, RaiseNeedsKind) {
  auto d = make_mock();
  EXPECT_THROW(d.program_call("x", {}, Raise{"", "m"}), ToolError);
}

TEST(Double, PhaseSafetyGrid) {
  for (auto mode : {DoubleMode::Mock, DoubleMode::Stub}) {
    Double programming(mode);
    EXPECT_EQ(error_kind([&] { programming.invoke("m", {}); }), ErrorKind::DoubleFailure);
    EXPECT_EQ(error_kind([&] { programming.verify(); }), ErrorKind::DoubleFailure);
    Double replay(mode);
    replay.end_programming();
    EXPECT_EQ(error_kind([&] { replay.program_call("m", {}, Return{}); }), ErrorKind::DoubleFailure);
    EXPECT_EQ(error_kind([&] { replay.end_programming(); }), ErrorKind::DoubleFailure);
    EXPECT_EQ(error_kind([&] { replay.set_stub_default(Return{}); }), ErrorKind::DoubleFailure);
    EXPECT_TRUE(replay.verify().passed);
  }
}

TEST(Stub, NonConsumingAndLenient) {
  auto s = make_stub();
  s.program_call("credit", {100}, Return{Value(7)});
  s.end_programming();
  for (int i = 0; i < 3; ++i)
    EXPECT_EQ(s.invoke("credit", {100}), Value(7));
  EXPECT_EQ(s.invoke("anything", {"x"}), Value());
  EXPECT_TRUE(s.verify().passed);

  auto idle = make_stub();
  idle.program_call("credit", {100}, Return{Value()});
  idle.end_programming();
  EXPECT_TRUE(idle.verify().passed);
}

TEST(Stub, DefaultIsOverridable) {
  auto s = make_stub();
  s.set_stub_default(Return{Value("n/a")});
  s.end_programming();
  EXPECT_EQ(s.invoke("whatever", {}), Value("n/a"));
  EXPECT_EQ(s.log().back().outcome, CallOutcome::Defaulted);
}

TEST(Mock, MatchingAgreesWithValueEq) {
  proptest::Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    auto programmed = proptest::random_value(rng, 1);
    auto called = proptest::coin(rng, 0.4) ? programmed : proptest::random_value(rng, 1);
    auto d = make_mock();
    d.program_call("m", {programmed}, Return{Value(1)});
    d.end_programming();
    bool matched = true;
    try {
      d.invoke("m", {called});
    } catch (const ToolError&) {
      matched = false;
    }
    EXPECT_EQ(matched, proptest::structural_equal(programmed, called));
  }
}

namespace {

struct Sequence {
  std::vector<Call> programmed;
  std::vector<Call> attempted;
};

Sequence random_sequence(proptest::Rng& rng) {
  const char* methods[] = {"debit", "credit", "balance", "close"};
  auto random_call = [&] {
    return Call{methods[proptest::pick(rng, 4)], {Value(static_cast<long long>(proptest::pick(rng, 3)))}};
  };
  Sequence s;
  for (auto n = proptest::pick(rng, 6); n > 0; --n)
    s.programmed.push_back(random_call());
  // Mostly replay the programmed calls, sometimes drop or add one.
  s.attempted = s.programmed;
  std::shuffle(s.attempted.begin(), s.attempted.end(), rng);
  if (!s.attempted.empty() && proptest::coin(rng, 0.3))
    s.attempted.pop_back();
  if (proptest::coin(rng, 0.3))
    s.attempted.push_back(random_call());
  while (s.attempted.size() > 10)
    s.attempted.pop_back();
  return s;
}

}  // namespace

TEST(Mock, VerifyMatchesMultisetOracleAndConserves) {
  proptest::Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    auto seq = random_sequence(rng);
    auto d = make_mock();
    for (const auto& c : seq.programmed)
      d.program_call(c.method, c.args, Return{Value()});
    d.end_programming();
    for (const auto& c : seq.attempted) {
      try {
        d.invoke(c.method, c.args);
      } catch (const ToolError&) {
      }
      std::size_t invoked = 0;
      for (const auto& pc : d.programmed())
        invoked += pc.times_invoked;
      EXPECT_EQ(invoked + d.unexpected().size(), d.log().size());
    }
    EXPECT_EQ(d.verify().passed, proptest::multiset_verdict(seq.programmed, seq.attempted));
  }
}

TEST(Stub, NeverFails) {
  proptest::Rng rng(47);
  for (int i = 0; i < 500; ++i) {
    auto seq = random_sequence(rng);
    auto s = make_stub();
    for (const auto& c : seq.programmed)
      s.program_call(c.method, c.args, Return{Value(1)});
    s.end_programming();
    for (const auto& c : seq.attempted)
      EXPECT_NO_THROW(s.invoke(c.method, c.args));
    EXPECT_TRUE(s.verify().passed);
  }
}
