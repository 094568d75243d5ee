#pragma once

// Genus-0 primary r-spin correlators <a_1, ..., a_n>.
//
// Three- and four-point values are closed forms. Higher point counts are
// reconstructed from the WDVV equations at n+1 points: every degeneration
// term there splits into brackets of at most n points, and an n-point factor
// only ever appears next to a three-point factor, so the n-point brackets
// enter linearly.

#include "rspin/core.hpp"
#include "rspin/enumerate.hpp"
#include "rspin/linear_system.hpp"
#include "rspin/store.hpp"

#include <array>
#include <map>
#include <mutex>
#include <set>
#include <utility>

namespace rspin {

inline EvalResult three_point(int r, int a1, int a2, int a3) {
  const std::array<int, 3> a{a1, a2, a3};
  if (!genus0_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  return EvalResult{Rational(1), Status::ok, {"three-point"}};
}

// (1/r) * min over the multiset {a_i} u {r-1-a_i}.
inline EvalResult four_point(int r, int a1, int a2, int a3, int a4) {
  const std::array<int, 4> a{a1, a2, a3, a4};
  if (!genus0_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  int m = r;
  for (int x : a) m = std::min({m, x, r - 1 - x});
  return EvalResult{Rational(m) / Rational(r), Status::ok, {"four-point"}};
}

// Twist at the node of a genus-0 component carrying the given twists:
// the unique a' in [0, r-1] with a' = -2 - sum (mod r).
inline int node_label(int r, std::span<const int> subset) {
  check_grading(r, subset);
  long v = (-2 - sum_of(subset)) % r;
  if (v < 0) v += r;
  return static_cast<int>(v);
}

// sum_{a+b=m} <a, b, x_1, ..., x_n> = ((n-1)!/r^(n-1)) prod (r-1-x_i).
// `extended` admits r-2 < m <= r for n >= 2.
inline Rational loop_sum(int r, int m, std::span<const int> x, bool extended = false) {
  check_r(r);
  const int n = static_cast<int>(x.size());
  if (n < 1) throw PreconditionError("loop_sum needs at least one x");
  for (int v : x)
    if (v < 0 || v > r - 2) throw PreconditionError("loop_sum: x_i must lie in [0, r-2]");
  if (m < 0) throw PreconditionError("loop_sum: m must be nonnegative");
  const int m_max = (extended && n >= 2) ? r : r - 2;
  if (m > m_max) {
    if (extended && n == 1) throw PreconditionError("loop_sum: extended range needs n >= 2");
    throw PreconditionError("loop_sum: m out of range");
  }
  if (sum_of(x) != static_cast<long>(n) * r - m - 2) throw PreconditionError("loop_sum: sum x_i != n r - m - 2");
  Rational out = factorial(n - 1) / power(Rational(r), n - 1);
  for (int v : x) out *= Rational(r - 1 - v);
  return out;
}

// Linear system for the n-point brackets at fixed r.
struct WdvvSystem {
  int r = 2;
  int n = 5;
  LinearSystem<Genus0Key> system;
};

// True for n-point keys that the WDVV system treats as unknowns: selection
// holds and no entry is 0 or r-1 (those vanish outright for n >= 4).
inline bool is_wdvv_unknown(int r, std::span<const int> a) {
  if (!genus0_selection(r, a)) return false;
  for (int x : a)
    if (x == 0 || x == r - 1) return false;
  return true;
}

// Builds the WDVV equations among n-point brackets. `lower(r, list)` must return
// the exact value of any bracket with fewer than n points.
template <class LowerEval>
WdvvSystem wdvv_equations(int r, int n, LowerEval&& lower) {
  check_r(r);
  if (n < 5) throw PreconditionError("wdvv_equations needs n >= 5");
  WdvvSystem out{r, n, {}};
  const long target_sum = static_cast<long>(n - 2) * r - 2;
  for_each_multiset(n, 1, r - 2, target_sum, [&](const std::vector<int>& a) { out.system.declare(Genus0Key{r, a}); });

  const int points = n + 1;
  using Equation = LinearEquation<Genus0Key>;
  std::set<std::pair<std::vector<std::pair<Genus0Key, Rational>>, Rational>> seen;

  // Adds sign * (sum over splittings {p,q,I | s,t,J}) to eq; known products
  // move to the right-hand side.
  auto accumulate = [&](Equation& eq, const std::vector<int>& list, std::array<int, 4> quad, const Rational& sign) {
    std::vector<int> rest;
    for (int i = 0; i < points; ++i)
      if (i != quad[0] && i != quad[1] && i != quad[2] && i != quad[3]) rest.push_back(list[i]);
    const int m = static_cast<int>(rest.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<int> left{list[quad[0]], list[quad[1]]};
      std::vector<int> right{list[quad[2]], list[quad[3]]};
      for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? left : right).push_back(rest[i]);
      const int node = node_label(r, left);
      if (node == r - 1) continue;  // a' = a'' = r-1: vanishes
      left.push_back(node);
      right.push_back(r - 2 - node);
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());
      auto value_of = [&](const std::vector<int>& b) -> std::optional<Rational> {
        if (static_cast<int>(b.size()) < n) return lower(r, b);
        return std::nullopt;
      };
      auto lv = value_of(left);
      auto rv = value_of(right);
      if (lv && rv) {
        eq.constant -= sign * *lv * *rv;
      } else {
        const auto& big = lv ? right : left;
        const Rational& small = lv ? *lv : *rv;
        if (small.is_zero() || !is_wdvv_unknown(r, big)) continue;
        eq.add(Genus0Key{r, big}, sign * small);
      }
    }
  };

  for_each_multiset(points, 0, r - 2, target_sum, [&](const std::vector<int>& list) {
    for (int i = 0; i < points; ++i)
      for (int j = i + 1; j < points; ++j)
        for (int k = j + 1; k < points; ++k)
          for (int l = k + 1; l < points; ++l) {
            const std::array<std::array<int, 4>, 3> pairings{{{i, j, k, l}, {i, k, j, l}, {i, l, j, k}}};
            for (int other = 1; other < 3; ++other) {
              Equation eq;
              accumulate(eq, list, pairings[0], Rational(1));
              accumulate(eq, list, pairings[other], Rational(-1));
              if (eq.coefficients.empty()) continue;
              // normalize so the leading coefficient is 1, then deduplicate
              const Rational lead = eq.coefficients.begin()->second.inverse();
              std::vector<std::pair<Genus0Key, Rational>> sig;
              for (auto& [key, c] : eq.coefficients) sig.emplace_back(key, c * lead);
              if (!seen.emplace(sig, eq.constant * lead).second) continue;
              out.system.add(std::move(eq));
            }
          }
  });
  return out;
}

class Genus0Solver {
 public:
  explicit Genus0Solver(CacheStore* cache = nullptr) : cache_(cache) {}

  EvalResult solve_bracket(int r, std::span<const int> a) {
    std::lock_guard lock(mutex_);
    auto key = Genus0Key::make(r, a);
    if (key.size() < 3) throw PreconditionError("genus-0 brackets need at least three points");
    if (!genus0_selection(r, key.a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
    if (vanishing_by_axiom(r, key.a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
    const auto& v = key.a;
    if (key.size() == 3) return three_point(r, v[0], v[1], v[2]);
    if (key.size() == 4) return four_point(r, v[0], v[1], v[2], v[3]);
    if (v.front() == 0) return EvalResult{Rational(0), Status::ok, {"zero-entry"}};
    std::vector<std::string> trace;
    auto value = lookup(key, trace);
    return EvalResult{std::move(value), Status::ok, std::move(trace)};
  }

  WdvvSystem wdvv_equations(int r, int n) {
    std::lock_guard lock(mutex_);
    return rspin::wdvv_equations(r, n, [this](int rr, const std::vector<int>& b) { return value(rr, b); });
  }

 private:
  Rational value(int r, const std::vector<int>& a) { return solve_bracket(r, a).value; }

  Rational lookup(const Genus0Key& key, std::vector<std::string>& trace) {
    if (auto it = memo_.find(key); it != memo_.end()) {
      trace.push_back("memo");
      return it->second;
    }
    if (cache_) {
      if (auto hit = cache_->get(key.str())) {
        trace.push_back("cache");
        memo_.emplace(key, *hit);
        return *hit;
      }
    }
    const std::pair<int, int> level{key.r, static_cast<int>(key.size())};
    if (!solved_levels_.contains(level)) {
      solved_levels_.insert(level);
      auto sys = wdvv_equations(level.first, level.second);
      auto sol = sys.system.solve();
      if (!sol.consistent) throw Error("inconsistent WDVV system at " + key.str());
      for (auto& [k, val] : sol.determined) {
        memo_.emplace(k, val);
        if (cache_) cache_->put(k.str(), val);
      }
      trace.push_back("wdvv");
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    throw Underdetermined("WDVV elimination leaves " + key.str() + " undetermined");
  }

  CacheStore* cache_;
  std::recursive_mutex mutex_;
  std::map<Genus0Key, Rational> memo_;
  std::set<std::pair<int, int>> solved_levels_;
};

}  // namespace rspin
