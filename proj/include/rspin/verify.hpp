#pragma once

// Exact verification suites. Each suite walks a parameter window in a fixed
// order and records every disagreement together with a reproducer key.

#include "rspin/core.hpp"
#include "rspin/dr1.hpp"
#include "rspin/enumerate.hpp"
#include "rspin/genus0.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <string>
#include <vector>

namespace rspin {

struct Failure {
  std::string key;
  Rational expected;
  Rational got;
  std::string note;

  friend bool operator==(const Failure&, const Failure&) = default;
};

struct SuiteReport {
  std::string suite;
  std::size_t cases = 0;
  std::vector<Failure> failures;
  std::chrono::milliseconds elapsed{0};

  bool passed() const { return failures.empty(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["cases"] = cases;
    auto& f = j["failures"] = nlohmann::ordered_json::array();
    for (auto& x : failures) {
      nlohmann::ordered_json e;
      e["key"] = x.key;
      e["expected"] = x.expected.str();
      e["got"] = x.got.str();
      if (!x.note.empty()) e["note"] = x.note;
      f.push_back(std::move(e));
    }
    j["elapsed_ms"] = elapsed.count();
    return j;
  }
};

struct VerifyBounds {
  int r_max = 6;
  int n_max = 5;
  int k_sum_max = 8;
  bool extended = false;  // loop suite: also r-2 < m <= r for n >= 2
};

namespace detail {

class SuiteRun {
 public:
  explicit SuiteRun(std::string name) : start_(std::chrono::steady_clock::now()) { report_.suite = std::move(name); }

  void check(const std::string& key, const Rational& expected, const Rational& got, std::string note = {}) {
    ++report_.cases;
    if (expected != got) report_.failures.push_back({key, expected, got, std::move(note)});
  }

  void check(const std::string& key, bool ok, std::string note) {
    ++report_.cases;
    if (!ok) report_.failures.push_back({key, Rational(1), Rational(0), std::move(note)});
  }

  void error(const std::string& key, const Rational& expected, const std::string& what) {
    ++report_.cases;
    report_.failures.push_back({key, expected, Rational(0), what});
  }

  SuiteReport finish() {
    std::stable_sort(report_.failures.begin(), report_.failures.end(),
                     [](const Failure& a, const Failure& b) { return a.key < b.key; });
    report_.elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
    return std::move(report_);
  }

 private:
  SuiteReport report_;
  std::chrono::steady_clock::time_point start_;
};

// Selection-valid twist multisets for genus-1 DR brackets with n entries.
inline void for_each_dr1_grading(int r, int n, const std::function<void(const std::vector<int>&)>& f) {
  for_each_multiset(n, 0, r - 1, static_cast<long>(n - 1) * r, f);
}

}  // namespace detail

// sum_{a+b=m} <a, b, x> equals the loop-sum formula. Point counts
// run from 3 to n_max, so x has 1 .. n_max-2 entries.
inline SuiteReport check_prop_loop(const VerifyBounds& bounds, Genus0Solver& g0) {
  detail::SuiteRun run(bounds.extended ? "loop-extended" : "loop");
  for (int r = 2; r <= bounds.r_max; ++r)
    for (int nx = 1; nx + 2 <= bounds.n_max; ++nx) {
      const int m_lo = bounds.extended ? (nx >= 2 ? r - 1 : r + 1) : 0;
      const int m_hi = bounds.extended ? r : r - 2;
      for (int m = std::max(m_lo, 0); m <= m_hi; ++m)
        for_each_multiset(nx, 0, r - 2, static_cast<long>(nx) * r - m - 2, [&](const std::vector<int>& x) {
          const std::string key = "loop:r=" + std::to_string(r) + ":m=" + std::to_string(m) + ":x=" + join(x);
          const Rational expected = loop_sum(r, m, x, bounds.extended);
          try {
            Rational got;
            std::vector<int> list{0, 0};
            list.insert(list.end(), x.begin(), x.end());
            for (int a = 0; a <= m; ++a) {
              const int b = m - a;
              if (a > r - 1 || b > r - 1) continue;
              list[0] = a;
              list[1] = b;
              got += g0.solve_bracket(r, list).value;
            }
            run.check(key, expected, got);
          } catch (const Error& e) {
            run.error(key, expected, e.what());
          }
        });
    }
  return run.finish();
}

inline SuiteReport check_prop_loop(const VerifyBounds& bounds) {
  Genus0Solver g0;
  return check_prop_loop(bounds, g0);
}

// Every Relation 1/2 instance has zero residual under the closed formula, and
// every Relation 3 bracket evaluates to zero.
inline SuiteReport check_relations(const VerifyBounds& bounds) {
  detail::SuiteRun run("relations");
  auto closed = [](const DR1Key& k) { return closed_form(k).value; };
  for (int r = 2; r <= bounds.r_max; ++r)
    for (int n = 2; n <= bounds.n_max; ++n)
      detail::for_each_dr1_grading(r, n, [&](const std::vector<int>& a) {
        const Rational b = b_value(r, a).value;
        for_each_zero_sum_vector(n, bounds.k_sum_max, [&](const std::vector<int>& k) {
          const std::string ctx = "r=" + std::to_string(r) + ":k=" + join(k) + ":a=" + join(a);
          auto key = DR1Key::make(r, k, a);
          if (relation3_check(key)) run.check("relation3:" + key.str(), Rational(0), closed(key));
          for (std::size_t i = 0; i < k.size(); ++i) {
            if (k[i] <= 0) continue;
            const std::string at = ":designated=" + std::to_string(i);
            run.check("relation1:" + ctx + at, Rational(0), relation1_instance(r, k, a, i).residual(closed, b));
            for (std::size_t z = 0; z < k.size(); ++z)
              if (k[z] == 0)
                run.check("relation2:" + ctx + at + ":zero=" + std::to_string(z), Rational(0),
                          relation2_instance(r, k, a, i, z).residual(closed, b));
          }
        });
      });
  return run.finish();
}

// The relational solver and the closed formula agree on every canonical key.
inline SuiteReport check_oracle_equivalence(const VerifyBounds& bounds, RelationalSolver& solver) {
  detail::SuiteRun run("oracle");
  std::set<DR1Key> keys;
  for (int r = 2; r <= bounds.r_max; ++r)
    for (int n = 2; n <= bounds.n_max; ++n)
      detail::for_each_dr1_grading(r, n, [&](const std::vector<int>& a) {
        for_each_zero_sum_vector(n, bounds.k_sum_max,
                                 [&](const std::vector<int>& k) { keys.insert(DR1Key::make(r, k, a)); });
      });
  for (auto& key : keys) {
    const Rational expected = closed_form(key).value;
    try {
      run.check(key.str(), expected, solver.solve(key).value);
    } catch (const ReductionStalled& e) {
      run.error(key.str(), expected, std::string("reduction-stalled: ") + e.what());
    }
  }
  return run.finish();
}

inline SuiteReport check_oracle_equivalence(const VerifyBounds& bounds) {
  RelationalSolver solver;
  return check_oracle_equivalence(bounds, solver);
}

// Vanishing axiom, zero-entry vanishing, genus determination, and agreement of
// the two B routes, on every evaluator.
inline SuiteReport check_axioms(const VerifyBounds& bounds, Genus0Solver& g0, RelationalSolver& rel) {
  detail::SuiteRun run("axioms");
  for (int r = 2; r <= bounds.r_max; ++r) {
    for (int n = 3; n <= bounds.n_max; ++n)
      for_each_multiset(n, 0, r - 1, static_cast<long>(n - 2) * r - 2, [&](const std::vector<int>& a) {
        const std::string key = Genus0Key{r, a}.str();
        std::vector<Insertion> ins;
        for (int x : a) ins.push_back({0, x});
        run.check(key + ":genus", genus_of(r, ins) == std::optional<int>(0), "genus_of != 0");
        run.check(key + ":divisibility", spin_divisibility(r, 0, a), "2g-2-sum a not divisible by r");
        const bool axiom = vanishing_by_axiom(r, a);
        const bool zero_entry = n >= 4 && a.front() == 0;
        if (!axiom && !zero_entry) return;
        try {
          auto solved = g0.solve_bracket(r, a);
          run.check(key + ":solve", Rational(0), solved.value);
          if (axiom) run.check(key + ":status", solved.status == Status::vanishing_axiom_zero, "status");
          if (n == 3) run.check(key + ":three-point", Rational(0), three_point(r, a[0], a[1], a[2]).value);
          if (n == 4) run.check(key + ":four-point", Rational(0), four_point(r, a[0], a[1], a[2], a[3]).value);
        } catch (const Error& e) {
          run.error(key, Rational(0), e.what());
        }
      });

    for (int n = 1; n <= bounds.n_max; ++n)
      detail::for_each_dr1_grading(r, n, [&](const std::vector<int>& a) {
        const std::string ctx = "b:r=" + std::to_string(r) + ":a=" + join(a);
        std::vector<Insertion> ins;
        for (std::size_t i = 0; i < a.size(); ++i) ins.push_back({i == 0 ? 1 : 0, a[i]});
        run.check(ctx + ":genus", genus_of(r, ins) == std::optional<int>(1), "genus_of != 1");
        run.check(ctx + ":divisibility", spin_divisibility(r, 1, a), "2g-2-sum a not divisible by r");
        const Rational b = b_value(r, a).value;
        run.check(ctx + ":trr", b, b_value_trr(r, a).value);
        if (!vanishing_by_axiom(r, a)) return;
        run.check(ctx + ":vanishing", Rational(0), b);
        if (n < 2) return;
        for_each_zero_sum_vector(n, bounds.k_sum_max, [&](const std::vector<int>& k) {
          auto key = DR1Key::make(r, k, a);
          run.check(key.str() + ":closed", Rational(0), closed_form(key).value);
          run.check(key.str() + ":relations", Rational(0), rel.solve(key).value);
        });
      });
  }
  return run.finish();
}

inline SuiteReport check_axioms(const VerifyBounds& bounds) {
  Genus0Solver g0;
  RelationalSolver rel;
  return check_axioms(bounds, g0, rel);
}

// "all" runs loop, relations, oracle and axioms; the extended loop range is
// added when bounds.extended is set.
inline std::vector<SuiteReport> run_suites(const std::string& name, const VerifyBounds& bounds,
                                           CacheStore* cache = nullptr) {
  Genus0Solver g0(cache);
  RelationalSolver rel;
  std::vector<SuiteReport> out;
  const bool all = name == "all";
  if (all || name == "loop") {
    auto b = bounds;
    b.extended = false;
    out.push_back(check_prop_loop(b, g0));
    if (bounds.extended) {
      b.extended = true;
      out.push_back(check_prop_loop(b, g0));
    }
  }
  if (all || name == "relations") out.push_back(check_relations(bounds));
  if (all || name == "oracle") out.push_back(check_oracle_equivalence(bounds, rel));
  if (all || name == "axioms") out.push_back(check_axioms(bounds, g0, rel));
  if (out.empty()) throw PreconditionError("unknown suite '" + name + "'");
  return out;
}

}  // namespace rspin
