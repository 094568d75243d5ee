#include "rspin/verify.hpp"

#include <gtest/gtest.h>

using namespace rspin;

TEST(VerifyLoop, SmallWindowPasses) {
  auto rep = check_prop_loop(VerifyBounds{5, 4, 8, false});
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.cases, 10u);
  EXPECT_EQ(rep.suite, "loop");
}

TEST(VerifyLoop, ContainsWorkedCase) {
  // r = 5, m = 2, x = (3,3) is inside the window: <1,1,3,3> = 1/5
  auto rep = check_prop_loop(VerifyBounds{5, 4, 8, false});
  auto just_r4 = check_prop_loop(VerifyBounds{4, 4, 8, false});
  EXPECT_GT(rep.cases, just_r4.cases);
  EXPECT_EQ(loop_sum(5, 2, std::vector{3, 3}), Rational(BigInt(1), BigInt(5)));
}

TEST(VerifyLoop, TinyWindowIsVacuous) {
  auto rep = check_prop_loop(VerifyBounds{2, 5, 8, false});
  EXPECT_TRUE(rep.passed());
}

// The extended range fails exactly on two-x windows at m = r.
TEST(VerifyLoop, ExtendedFailuresAreTwoPointAtMEqualsR) {
  auto rep = check_prop_loop(VerifyBounds{6, 5, 8, true});
  EXPECT_FALSE(rep.passed());
  for (auto& f : rep.failures) {
    auto x_at = f.key.find(":x=");
    auto x = parse_int_list(f.key.substr(x_at + 3));
    EXPECT_EQ(x.size(), 2u) << f.key;
    auto r = parse_int(f.key.substr(7, f.key.find(":m=") - 7));
    auto m = parse_int(f.key.substr(f.key.find(":m=") + 3, x_at - f.key.find(":m=") - 3));
    EXPECT_EQ(m, r) << f.key;
  }
  EXPECT_TRUE(std::is_sorted(rep.failures.begin(), rep.failures.end(),
                             [](const Failure& a, const Failure& b) { return a.key < b.key; }));
}

TEST(VerifyRelations, DefaultWindowPasses) {
  auto rep = check_relations(VerifyBounds{});
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.cases, 1000u);
}

TEST(VerifyOracle, DefaultWindowPasses) {
  auto rep = check_oracle_equivalence(VerifyBounds{});
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.cases, 300u);
}

TEST(VerifyAxioms, DefaultWindowPasses) {
  auto rep = check_axioms(VerifyBounds{});
  EXPECT_TRUE(rep.passed());
  for (auto& f : rep.failures) ADD_FAILURE() << f.key << " " << f.note;
}

TEST(VerifyReport, DeterministicAndSerializable) {
  VerifyBounds b{6, 5, 8, true};
  auto one = check_prop_loop(b);
  auto two = check_prop_loop(b);
  EXPECT_EQ(one.cases, two.cases);
  EXPECT_EQ(one.failures, two.failures);
  auto j = one.to_json();
  EXPECT_EQ(j["suite"], "loop-extended");
  EXPECT_EQ(j["cases"], one.cases);
  EXPECT_TRUE(j["elapsed_ms"].is_number());
  ASSERT_FALSE(j["failures"].empty());
  EXPECT_TRUE(j["failures"][0].contains("key"));
  EXPECT_TRUE(j["failures"][0]["expected"].is_string());
}

TEST(VerifyRun, SuiteSelection) {
  EXPECT_EQ(run_suites("all", VerifyBounds{4, 4, 6, false}).size(), 4u);
  EXPECT_EQ(run_suites("all", VerifyBounds{4, 4, 6, true}).size(), 5u);
  EXPECT_EQ(run_suites("oracle", VerifyBounds{4, 4, 6, false}).size(), 1u);
  EXPECT_THROW(run_suites("bogus", VerifyBounds{}), PreconditionError);
}
