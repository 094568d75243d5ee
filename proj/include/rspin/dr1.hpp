#pragma once

// Genus-1 double ramification brackets.
//
// Two independent routes:
//   * closed_form: (1/2 sum k_i^2 - 1) * B, with
//     B = (1/24) ((n-1)!/r^(n-1)) prod (r-1-a_i);
//   * RelationalSolver: reduces any bracket to Relation 3 zeros and multiples
//     of B (obtained through the genus-0 loop sum) using Relations 1 and 2.
//
// Relation 1, for a bracket (k_1..k_{n+} | 0..0 | -kt_1..-kt_{n-}):
//   (k_1+1)(n+ + n- + 1) B = -(k_1 + n+ + n- + 1) <k>
//                            - sum_{i>=2} (k_i - 1) <k_1+1, .., k_i-1, ..>
//                            + sum_j (kt_j + 1) <k_1+1, .., -(kt_j+1), ..>
// Relation 2, when some zero slot is present:
//   (k_1+1) B = -<k> + <k_1+1, .., zero slot replaced by -1, ..>
// Relation 3: <1 | 0..0 | -1> = 0.
// The twist attached to each marked point never moves.

#include "rspin/core.hpp"
#include "rspin/genus0.hpp"
#include "rspin/linear_system.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <set>

namespace rspin {

// (1/24) (n-1)!/r^(n-1) prod (r-1-a_i), the genus-1 one-psi correlator.
inline EvalResult b_value(int r, std::span<const int> a) {
  if (a.empty()) throw PreconditionError("B needs at least one insertion");
  if (!dr1_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  const int n = static_cast<int>(a.size());
  Rational v = factorial(n - 1) / power(Rational(r), n - 1) / Rational(24);
  for (int x : a) v *= Rational(r - 1 - x);
  return EvalResult{v, Status::ok, {"b-closed"}};
}

// B through the topological recursion: psi_1 on M_{1,n} restricted to the
// divisor with a genus-1 tail contributes nothing, and the loop divisor gives
// (1/24) sum_{a'+a''=r-2} <a_1, .., a_n, a', a''>_0, which is the loop sum at m = r-2.
inline EvalResult b_value_trr(int r, std::span<const int> a) {
  if (a.empty()) throw PreconditionError("B needs at least one insertion");
  if (!dr1_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  return EvalResult{loop_sum(r, r - 2, a) / Rational(24), Status::ok, {"b-trr", "loop-sum"}};
}

// Same divisor sum, but every genus-0 bracket is evaluated individually.
inline EvalResult b_value_trr_bruteforce(int r, std::span<const int> a, Genus0Solver& g0) {
  if (a.empty()) throw PreconditionError("B needs at least one insertion");
  if (!dr1_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  Rational sum;
  std::vector<int> list(a.begin(), a.end());
  list.resize(a.size() + 2);
  for (int x = 0; x <= r - 2; ++x) {
    list[a.size()] = x;
    list[a.size() + 1] = r - 2 - x;
    sum += g0.solve_bracket(r, list).value;
  }
  return EvalResult{sum / Rational(24), Status::ok, {"b-trr", "genus0-sum"}};
}

inline EvalResult closed_form(const DR1Key& key) {
  const auto a = key.a();
  if (!dr1_selection(key.r(), a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
  if (vanishing_by_axiom(key.r(), a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
  long sq = 0;
  for (auto& e : key.entries()) sq += static_cast<long>(e.k) * e.k;
  Rational factor = Rational(sq) / Rational(2) - Rational(1);
  auto b = b_value(key.r(), a);
  return EvalResult{factor * b.value, Status::ok, {"closed-form"}};
}

inline EvalResult closed_form(int r, std::span<const int> k, std::span<const int> a) {
  return closed_form(DR1Key::make(r, k, a));
}

// <1 | 0 .. 0 | -1>
inline bool relation3_check(const DR1Key& key) {
  return key.n_plus() == 1 && key.n_minus() == 1 && key.abs_k_sum() == 2;
}

enum class RelationKind { relation1, relation2, relation3 };

inline const char* to_string(RelationKind k) {
  switch (k) {
    case RelationKind::relation1: return "relation1";
    case RelationKind::relation2: return "relation2";
    case RelationKind::relation3: return "relation3";
  }
  return "?";
}

// b_coefficient * B = sum terms[key] * <key>, with B taken at (r, a).
struct RelationInstance {
  RelationKind kind = RelationKind::relation1;
  std::map<DR1Key, Rational> terms;
  Rational b_coefficient;
  int r = 2;
  std::vector<int> a;

  void add(const DR1Key& key, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  // sum terms * value - b_coefficient * B; zero when the relation holds.
  template <class Eval>
  Rational residual(Eval&& value, const Rational& b) const {
    Rational out = -b_coefficient * b;
    for (auto& [key, c] : terms) out += c * value(key);
    return out;
  }

  std::string str() const {
    std::string s = std::string(to_string(kind)) + ":r=" + std::to_string(r) + ":a=" + join(a) + ": " +
                    b_coefficient.pretty() + " B =";
    for (auto& [key, c] : terms) s += " + (" + c.pretty() + ") " + key.str();
    return s;
  }
};

namespace detail {

inline void check_context(int r, std::span<const int> k, std::span<const int> a, std::size_t designated) {
  DR1Key::make(r, k, a);  // structural validation
  if (designated >= k.size() || k[designated] < 1)
    throw PreconditionError("designated entry must be a positive k");
}

}  // namespace detail

inline RelationInstance relation1_instance(int r, std::span<const int> k, std::span<const int> a,
                                           std::size_t designated = 0) {
  detail::check_context(r, k, a, designated);
  RelationInstance inst{RelationKind::relation1, {}, {}, r, {a.begin(), a.end()}};
  long n_plus = 0, n_minus = 0;
  for (int x : k) {
    n_plus += x > 0;
    n_minus += x < 0;
  }
  const long k1 = k[designated];
  inst.b_coefficient = Rational((k1 + 1) * (n_plus + n_minus + 1));
  inst.add(DR1Key::make(r, k, a), Rational(-(k1 + n_plus + n_minus + 1)));
  std::vector<int> v(k.begin(), k.end());
  v[designated] += 1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i == designated || k[i] == 0) continue;
    auto w = v;
    if (k[i] > 0) {
      if (k[i] == 1) continue;  // coefficient k_i - 1 vanishes
      w[i] -= 1;
      inst.add(DR1Key::make(r, w, a), Rational(-(k[i] - 1)));
    } else {
      w[i] -= 1;
      inst.add(DR1Key::make(r, w, a), Rational(-k[i] + 1));
    }
  }
  return inst;
}

// zero_slot defaults to the first k_i = 0.
inline RelationInstance relation2_instance(int r, std::span<const int> k, std::span<const int> a,
                                           std::size_t designated = 0,
                                           std::optional<std::size_t> zero_slot = std::nullopt) {
  detail::check_context(r, k, a, designated);
  if (!zero_slot) {
    auto it = std::find(k.begin(), k.end(), 0);
    if (it == k.end()) throw PreconditionError("relation 2 needs a zero entry");
    zero_slot = static_cast<std::size_t>(it - k.begin());
  }
  if (*zero_slot >= k.size() || k[*zero_slot] != 0) throw PreconditionError("relation 2 zero slot is not zero");
  RelationInstance inst{RelationKind::relation2, {}, {}, r, {a.begin(), a.end()}};
  inst.b_coefficient = Rational(k[designated] + 1);
  inst.add(DR1Key::make(r, k, a), Rational(-1));
  std::vector<int> w(k.begin(), k.end());
  w[designated] += 1;
  w[*zero_slot] = -1;
  inst.add(DR1Key::make(r, w, a), Rational(1));
  return inst;
}

inline RelationInstance relation3_instance(const DR1Key& key) {
  if (!relation3_check(key)) throw PreconditionError("not a relation 3 bracket: " + key.str());
  RelationInstance inst{RelationKind::relation3, {}, Rational(0), key.r(), key.a()};
  inst.add(key, Rational(1));
  return inst;
}

// Evaluates DR brackets from Relations 1-3 and B alone, never consulting the
// closed formula.
//
// Rewriting follows the uniqueness argument:
//   case 1  a 1 on one side, an entry > 1 on the other: the bracket is the
//           last term of Relation 2 for a bracket with one fewer nonzero entry;
//   case 2  all entries +-1: the bracket is the first term of Relation 1;
//   case 3  all |k| >= 2: the bracket is a third-sum term of Relation 1 whose
//           other terms lower the smallest |k| on the negative side.
// Measure: (nonzero entry count, smallest |k|) decreases lexicographically. A
// visited set guards against cycles; if one is hit, the bracket is solved from
// all relation instances in a window of the same entry count.
class RelationalSolver {
 public:
  EvalResult solve(const DR1Key& key) {
    std::lock_guard lock(mutex_);
    const auto a = key.a();
    if (!dr1_selection(key.r(), a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
    if (vanishing_by_axiom(key.r(), a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
    const Rational b = b_value_trr(key.r(), a).value;
    std::vector<std::string> trace;
    std::set<DR1Key> visiting;
    try {
      auto v = rewrite(key, b, visiting, trace);
      return EvalResult{v, Status::ok, std::move(trace)};
    } catch (const ReductionStalled&) {
      return solve_window(key);
    }
  }

  EvalResult solve(int r, std::span<const int> k, std::span<const int> a) { return solve(DR1Key::make(r, k, a)); }

  // Assembles every Relation 1/2/3 instance whose brackets have the key's entry
  // count, twists and at most its sum |k_i|, and eliminates exactly.
  EvalResult solve_window(const DR1Key& key) {
    std::lock_guard lock(mutex_);
    const int r = key.r();
    const auto a = key.a();
    if (!dr1_selection(r, a)) return EvalResult::zero(Status::dimension_mismatch_zero, "selection");
    if (vanishing_by_axiom(r, a)) return EvalResult::zero(Status::vanishing_axiom_zero, "vanishing-axiom");
    const Rational b = b_value_trr(r, a).value;
    const int n = static_cast<int>(key.size());
    const int bound = static_cast<int>(key.abs_k_sum()) + 2;

    LinearSystem<DR1Key> sys;
    auto add_instance = [&](const RelationInstance& inst) {
      LinearEquation<DR1Key> eq;
      for (auto& [k, c] : inst.terms) eq.add(k, c);
      eq.constant = inst.b_coefficient * b;
      if (!eq.coefficients.empty()) sys.add(std::move(eq));
    };
    for_each_zero_sum_vector(n, bound, [&](const std::vector<int>& k) {
      long abs_sum = 0;
      for (int x : k) abs_sum += std::abs(x);
      auto here = DR1Key::make(r, k, a);
      sys.declare(here);
      if (relation3_check(here)) add_instance(relation3_instance(here));
      if (abs_sum + 2 > bound) return;
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] <= 0) continue;
        add_instance(relation1_instance(r, k, a, i));
        for (std::size_t z = 0; z < k.size(); ++z)
          if (k[z] == 0) add_instance(relation2_instance(r, k, a, i, z));
      }
    });
    auto sol = sys.solve();
    if (!sol.consistent) throw ReductionStalled("inconsistent relation window for " + key.str());
    auto v = sol.value(key);
    if (!v) throw ReductionStalled("relations leave " + key.str() + " undetermined");
    memo_.emplace(key, *v);
    return EvalResult{*v, Status::ok, {"window"}};
  }

 private:
  Rational rewrite(const DR1Key& t, const Rational& b, std::set<DR1Key>& visiting, std::vector<std::string>& trace) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    if (relation3_check(t)) {
      if (std::find(trace.begin(), trace.end(), "relation3") == trace.end()) trace.push_back("relation3");
      memo_.emplace(t, Rational(0));
      return Rational(0);
    }
    if (!visiting.insert(t).second) throw ReductionStalled("rewriting cycle at " + t.str());

    auto k = t.k();
    const auto a = t.a();
    const int r = t.r();
    bool one_pos = false, one_neg = false, big_pos = false, big_neg = false;
    for (int x : k) {
      one_pos |= x == 1;
      one_neg |= x == -1;
      big_pos |= x > 1;
      big_neg |= x < -1;
    }
    auto flip = [&] {
      for (int& x : k) x = -x;
    };
    auto first = [&](auto pred) {
      return static_cast<std::size_t>(std::find_if(k.begin(), k.end(), pred) - k.begin());
    };

    RelationInstance inst;
    if ((one_neg && big_pos) || (one_pos && big_neg)) {
      if (!(one_neg && big_pos)) flip();
      const auto p = first([](int x) { return x > 1; });
      const auto q = first([](int x) { return x == -1; });
      auto base = k;
      base[p] -= 1;
      base[q] = 0;
      inst = relation2_instance(r, base, a, p, q);
    } else if (!big_pos && !big_neg) {
      inst = relation1_instance(r, k, a, first([](int x) { return x > 0; }));
    } else {
      int smallest = std::numeric_limits<int>::max();
      for (int x : k)
        if (x != 0) smallest = std::min(smallest, std::abs(x));
      if (std::find(k.begin(), k.end(), -smallest) == k.end()) flip();
      const auto p = first([](int x) { return x > 0; });
      const auto q = first([smallest](int x) { return x == -smallest; });
      auto base = k;
      base[p] -= 1;
      base[q] += 1;
      inst = relation1_instance(r, base, a, p);
    }
    if (std::find(trace.begin(), trace.end(), to_string(inst.kind)) == trace.end()) trace.push_back(to_string(inst.kind));

    auto self = inst.terms.find(t);
    if (self == inst.terms.end()) throw ReductionStalled("rewrite lost its target at " + t.str());
    Rational acc = inst.b_coefficient * b;
    for (auto& [key, c] : inst.terms)
      if (key != t) acc -= c * rewrite(key, b, visiting, trace);
    Rational v = acc / self->second;
    visiting.erase(t);
    memo_.emplace(t, v);
    return v;
  }

  std::recursive_mutex mutex_;
  std::map<DR1Key, Rational> memo_;
};

}  // namespace rspin
