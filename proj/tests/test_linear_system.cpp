#include "rspin/linear_system.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

using namespace rspin;

namespace {

LinearEquation<std::string> eq(std::initializer_list<std::pair<std::string, long>> terms, long rhs) {
  LinearEquation<std::string> e;
  for (auto& [k, c] : terms) e.add(k, Rational(c));
  e.constant = Rational(rhs);
  return e;
}

}  // namespace

TEST(LinearSystem, SolvesSquareSystem) {
  LinearSystem<std::string> sys;
  sys.add(eq({{"x", 2}, {"y", 1}}, 5));
  sys.add(eq({{"x", 1}, {"y", -1}}, 1));
  auto sol = sys.solve();
  EXPECT_TRUE(sol.consistent);
  EXPECT_EQ(sol.value("x"), Rational(2));
  EXPECT_EQ(sol.value("y"), Rational(1));
  EXPECT_TRUE(sol.free.empty());
}

TEST(LinearSystem, ReportsFreeUnknowns) {
  LinearSystem<std::string> sys;
  sys.add(eq({{"x", 1}, {"y", 1}}, 3));
  sys.add(eq({{"z", 4}}, 2));
  sys.declare("w");
  auto sol = sys.solve();
  EXPECT_TRUE(sol.consistent);
  EXPECT_EQ(sol.value("z"), Rational(BigInt(1), BigInt(2)));
  EXPECT_FALSE(sol.value("x"));
  EXPECT_FALSE(sol.value("y"));
  EXPECT_TRUE(sol.free.contains("w"));
}

TEST(LinearSystem, DetectsInconsistency) {
  LinearSystem<std::string> sys;
  sys.add(eq({{"x", 1}, {"y", 1}}, 1));
  sys.add(eq({{"x", 2}, {"y", 2}}, 3));
  EXPECT_FALSE(sys.solve().consistent);
}

TEST(LinearSystem, CancellingCoefficientsAreDropped) {
  LinearEquation<std::string> e;
  e.add("x", Rational(2));
  e.add("x", Rational(-2));
  EXPECT_TRUE(e.coefficients.empty());
}

// Random overdetermined systems built from a known solution are recovered exactly.
TEST(LinearSystemProperty, RecoversPlantedSolution) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 8);
    std::vector<Rational> truth;
    for (int i = 0; i < n; ++i) truth.push_back(Rational(BigInt(static_cast<int>(rng() % 21) - 10), BigInt(1 + rng() % 7)));
    LinearSystem<int> sys;
    for (int row = 0; row < 2 * n; ++row) {
      LinearEquation<int> e;
      for (int i = 0; i < n; ++i)
        if (rng() % 2) e.add(i, Rational(static_cast<int>(rng() % 11) - 5));
      for (auto& [i, c] : e.coefficients) e.constant += c * truth[i];
      sys.add(std::move(e));
    }
    for (int i = 0; i < n; ++i) sys.declare(i);
    auto sol = sys.solve();
    ASSERT_TRUE(sol.consistent);
    for (auto& [i, v] : sol.determined) EXPECT_EQ(v, truth[i]);
  }
}
