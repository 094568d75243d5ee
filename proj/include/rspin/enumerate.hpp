#pragma once

// Small enumeration helpers shared by the solvers, the verification suites and
// the table exporter. All enumeration orders are deterministic.

#include <functional>
#include <vector>

namespace rspin {

// Calls f on every ascending list of `size` integers in [lo, hi] summing to `sum`.
inline void for_each_multiset(int size, int lo, int hi, long sum,
                              const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> cur;
  std::function<void(int, long)> rec = [&](int start, long remaining) {
    const int left = size - static_cast<int>(cur.size());
    if (left == 0) {
      if (remaining == 0) f(cur);
      return;
    }
    if (static_cast<long>(hi) * left < remaining) return;
    for (int v = start; v <= hi; ++v) {
      if (static_cast<long>(v) * left > remaining) break;
      cur.push_back(v);
      rec(v, remaining - v);
      cur.pop_back();
    }
  };
  if (size >= 0 && hi >= lo) rec(lo, sum);
}

// Calls f on every integer vector of length n with zero sum, sum |k_i| <= abs_max,
// and at least one nonzero entry.
inline void for_each_zero_sum_vector(int n, int abs_max, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> cur;
  std::function<void(long, long)> rec = [&](long partial, long used) {
    const int left = n - static_cast<int>(cur.size());
    if (left == 0) {
      if (partial != 0) return;
      for (int v : cur)
        if (v != 0) {
          f(cur);
          return;
        }
      return;
    }
    const long budget = abs_max - used;
    for (long v = -budget; v <= budget; ++v) {
      long u = used + (v < 0 ? -v : v);
      // the remaining entries must cancel the partial sum within the budget
      long rest = partial + v;
      if ((rest < 0 ? -rest : rest) > abs_max - u) continue;
      cur.push_back(static_cast<int>(v));
      rec(rest, u);
      cur.pop_back();
    }
  };
  if (n > 0) rec(0, 0);
}

}  // namespace rspin
