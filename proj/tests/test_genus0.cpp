#include "rspin/genus0.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rspin;

namespace {

Rational q(long n, long d) { return Rational(BigInt(n), BigInt(d)); }

// Direct search for the node twist: 2*0 - 2 - a' - sum divisible by r.
int node_label_by_search(int r, const std::vector<int>& subset) {
  long s = 0;
  for (int x : subset) s += x;
  int found = -1;
  for (int ap = 0; ap < r; ++ap)
    if ((-2 - ap - s) % r == 0) {
      EXPECT_EQ(found, -1) << "node label not unique";
      found = ap;
    }
  return found;
}

Rational brute_loop_sum(Genus0Solver& g0, int r, int m, const std::vector<int>& x) {
  Rational s;
  for (int a = 0; a <= m; ++a) {
    int b = m - a;
    if (a > r - 1 || b > r - 1) continue;
    std::vector<int> list{a, b};
    list.insert(list.end(), x.begin(), x.end());
    s += g0.solve_bracket(r, list).value;
  }
  return s;
}

}  // namespace

TEST(ThreePoint, Examples) {
  EXPECT_EQ(three_point(5, 1, 1, 1).value, Rational(1));
  EXPECT_EQ(three_point(3, 0, 0, 1).value, Rational(1));
  auto r = three_point(3, 1, 1, 1);
  EXPECT_EQ(r.value, Rational(0));
  EXPECT_EQ(r.status, Status::dimension_mismatch_zero);
  EXPECT_THROW(three_point(3, 3, 0, 0), InvalidGrading);
}

TEST(FourPoint, Examples) {
  EXPECT_EQ(four_point(5, 1, 1, 3, 3).value, q(1, 5));
  EXPECT_EQ(four_point(4, 1, 1, 2, 2).value, q(1, 4));
  auto z = four_point(4, 0, 2, 2, 2);
  EXPECT_EQ(z.value, Rational(0));
  EXPECT_EQ(z.status, Status::ok);
  auto v = four_point(4, 3, 1, 1, 1);
  EXPECT_EQ(v.status, Status::vanishing_axiom_zero);
  EXPECT_EQ(four_point(4, 1, 1, 1, 1).status, Status::dimension_mismatch_zero);
}

TEST(NodeLabel, Examples) {
  EXPECT_EQ(node_label(5, std::vector{1, 1}), 1);
  EXPECT_EQ(node_label(3, std::vector<int>{}), 1);
  EXPECT_EQ(node_label(4, std::vector{2, 2, 2}), 0);
}

TEST(NodeLabel, MatchesExhaustiveSearch) {
  std::mt19937 rng(2);
  for (int it = 0; it < 2000; ++it) {
    int r = 2 + static_cast<int>(rng() % 10);
    std::vector<int> s(rng() % 6);
    for (auto& x : s) x = static_cast<int>(rng() % r);
    EXPECT_EQ(node_label(r, s), node_label_by_search(r, s));
  }
}

TEST(LoopSum, Examples) {
  EXPECT_EQ(loop_sum(5, 2, std::vector{3, 3}), q(1, 5));
  EXPECT_EQ(loop_sum(4, 2, std::vector{2, 2}), q(1, 4));
  EXPECT_EQ(loop_sum(3, 1, std::vector{0}), Rational(2));
  // brute force: the only nonzero term of sum_{a+b=2} <a,b,2,2> is <1,1,2,2>
  EXPECT_EQ(four_point(4, 0, 2, 2, 2).value + four_point(4, 1, 1, 2, 2).value + four_point(4, 2, 0, 2, 2).value,
            loop_sum(4, 2, std::vector{2, 2}));
}

TEST(LoopSum, Preconditions) {
  EXPECT_THROW(loop_sum(5, 2, std::vector{3, 2}), PreconditionError);      // wrong sum
  EXPECT_THROW(loop_sum(5, 4, std::vector{2, 2}), PreconditionError);      // m > r-2
  EXPECT_NO_THROW(loop_sum(5, 4, std::vector{2, 2}, true));
  EXPECT_THROW(loop_sum(5, 6, std::vector{1, 1}, true), PreconditionError);  // m > r
  EXPECT_THROW(loop_sum(5, 4, std::vector{-1}, true), PreconditionError);   // n = 1 extended
  EXPECT_THROW(loop_sum(5, 4, std::vector{0}, true), PreconditionError);
  EXPECT_THROW(loop_sum(5, 1, std::vector{4, 4}), PreconditionError);       // x_i = r-1
  EXPECT_THROW(loop_sum(5, 0, std::vector<int>{}), PreconditionError);
}

TEST(Wdvv, InfeasibleGradingHasNoUnknowns) {
  Genus0Solver g0;
  auto sys = g0.wdvv_equations(2, 5);
  EXPECT_TRUE(sys.system.unknowns().empty());
  EXPECT_TRUE(sys.system.equations().empty());
  EXPECT_THROW(g0.wdvv_equations(5, 4), PreconditionError);
}

// Every generated equation has zero residual at the solved values, and every
// unknown is determined.
TEST(Wdvv, ResidualsVanishAtSolution) {
  Genus0Solver g0;
  for (int r = 3; r <= 7; ++r)
    for (int n = 5; n <= 6; ++n) {
      auto sys = g0.wdvv_equations(r, n);
      auto sol = sys.system.solve();
      ASSERT_TRUE(sol.consistent);
      EXPECT_TRUE(sol.free.empty()) << "r=" << r << " n=" << n;
      for (auto& eq : sys.system.equations()) {
        Rational lhs;
        for (auto& [key, c] : eq.coefficients) lhs += c * g0.solve_bracket(key.r, key.a).value;
        EXPECT_EQ(lhs, eq.constant);
      }
    }
}

TEST(SolveBracket, Examples) {
  Genus0Solver g0;
  EXPECT_EQ(g0.solve_bracket(5, std::vector{1, 1, 3, 3}).value, q(1, 5));
  auto v = g0.solve_bracket(4, std::vector{3, 1, 1, 1});
  EXPECT_EQ(v.value, Rational(0));
  EXPECT_EQ(v.status, Status::vanishing_axiom_zero);
  // <2,2,2,2,2> at r = 4: the single term of the m = 4 loop sum
  EXPECT_EQ(g0.solve_bracket(4, std::vector{2, 2, 2, 2, 2}).value, q(1, 8));
  EXPECT_THROW(g0.solve_bracket(4, std::vector{1, 1}), PreconditionError);
  EXPECT_THROW(g0.solve_bracket(4, std::vector{1, 1, 4}), InvalidGrading);
}

TEST(SolveBracket, LoopSumOracle) {
  Genus0Solver g0;
  int checked = 0;
  for (int r = 2; r <= 9; ++r)
    for (int nx = 1; nx <= 4; ++nx)
      for (int m = 0; m <= r - 2; ++m)
        for_each_multiset(nx, 0, r - 2, static_cast<long>(nx) * r - m - 2, [&](const std::vector<int>& x) {
          EXPECT_EQ(brute_loop_sum(g0, r, m, x), loop_sum(r, m, x)) << "r=" << r << " m=" << m << " x=" << join(x);
          ++checked;
        });
  EXPECT_GT(checked, 30);
}

// The extended range m = r-1 agrees everywhere; m = r agrees once there are
// at least three x's but not with two.
TEST(SolveBracket, ExtendedRangeBehaviour) {
  Genus0Solver g0;
  for (int r = 3; r <= 7; ++r)
    for (int nx = 2; nx <= 3; ++nx)
      for (int m = r - 1; m <= r; ++m)
        for_each_multiset(nx, 0, r - 2, static_cast<long>(nx) * r - m - 2, [&](const std::vector<int>& x) {
          const bool agrees = brute_loop_sum(g0, r, m, x) == loop_sum(r, m, x, true);
          EXPECT_EQ(agrees, m == r - 1 || nx >= 3) << "r=" << r << " m=" << m << " x=" << join(x);
        });
  // smallest disagreement: r = 4, x = (1,1): only <2,2,1,1> = 1/4 survives
  EXPECT_EQ(brute_loop_sum(g0, 4, 4, {1, 1}), q(1, 4));
  EXPECT_EQ(loop_sum(4, 4, std::vector{1, 1}, true), Rational(1));
}

TEST(SolveBracket, PermutationInvariance) {
  Genus0Solver g0;
  std::mt19937 rng(9);
  for (int r = 3; r <= 7; ++r)
    for (int n = 3; n <= 6; ++n)
      for_each_multiset(n, 0, r - 1, static_cast<long>(n - 2) * r - 2, [&](const std::vector<int>& a) {
        auto p = a;
        std::shuffle(p.begin(), p.end(), rng);
        EXPECT_EQ(g0.solve_bracket(r, a).value, g0.solve_bracket(r, p).value);
      });
}

TEST(SolveBracket, ZeroEntryVanishes) {
  Genus0Solver g0;
  for (int r = 2; r <= 7; ++r)
    for (int n = 4; n <= 6; ++n)
      for_each_multiset(n - 1, 0, r - 1, static_cast<long>(n - 2) * r - 2, [&](const std::vector<int>& rest) {
        auto a = rest;
        a.push_back(0);
        EXPECT_EQ(g0.solve_bracket(r, a).value, Rational(0));
      });
}

TEST(SolveBracket, UsesAndFillsCache) {
  CacheStore cache;
  Genus0Solver g0(&cache);
  auto v = g0.solve_bracket(6, std::vector{2, 3, 4, 4, 3});
  EXPECT_TRUE(cache.get("g0:r=6:a=2,3,3,4,4").has_value());
  EXPECT_EQ(*cache.get("g0:r=6:a=2,3,3,4,4"), v.value);

  // a fresh solver reads the value back instead of rebuilding the system
  CacheStore seeded;
  seeded.put("g0:r=6:a=2,3,3,4,4", q(7, 3));
  Genus0Solver from_cache(&seeded);
  auto hit = from_cache.solve_bracket(6, std::vector{4, 4, 3, 3, 2});
  EXPECT_EQ(hit.value, q(7, 3));
  EXPECT_EQ(hit.trace, std::vector<std::string>{"cache"});
}
