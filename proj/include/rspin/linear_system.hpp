#pragma once

// Sparse exact linear systems over the rationals, keyed by arbitrary ordered
// unknowns. Elimination is Gauss-Jordan with a deterministic pivot order:
// columns in ascending key order, and for each column the earliest unused row.

#include "rspin/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace rspin {

template <class Key>
struct LinearEquation {
  std::map<Key, Rational> coefficients;  // zero coefficients never stored
  Rational constant;                     // sum coefficients[x] * x = constant

  void add(const Key& key, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coefficients.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coefficients.erase(it);
    }
  }
};

template <class Key>
class LinearSystem {
 public:
  struct Solution {
    std::map<Key, Rational> determined;
    std::set<Key> free;  // unknowns left undetermined by the equations
    bool consistent = true;

    std::optional<Rational> value(const Key& k) const {
      auto it = determined.find(k);
      if (it == determined.end()) return std::nullopt;
      return it->second;
    }
  };

  void declare(const Key& k) { unknowns_.insert(k); }

  void add(LinearEquation<Key> eq) {
    for (auto& [k, c] : eq.coefficients) unknowns_.insert(k);
    equations_.push_back(std::move(eq));
  }

  const std::set<Key>& unknowns() const { return unknowns_; }
  const std::vector<LinearEquation<Key>>& equations() const { return equations_; }

  Solution solve() const {
    std::vector<Key> keys(unknowns_.begin(), unknowns_.end());
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < keys.size(); ++i) index.emplace(keys[i], i);

    using Row = std::map<std::size_t, Rational>;
    std::vector<Row> rows;
    std::vector<Rational> rhs;
    for (auto& eq : equations_) {
      Row row;
      for (auto& [k, c] : eq.coefficients) row.emplace(index.at(k), c);
      rows.push_back(std::move(row));
      rhs.push_back(eq.constant);
    }

    // Column -> rows that currently hold a nonzero in that column.
    std::vector<std::set<std::size_t>> occupancy(keys.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto& [c, v] : rows[i]) occupancy[c].insert(i);

    std::vector<bool> used(rows.size(), false);
    std::vector<std::optional<std::size_t>> pivot_row(keys.size());

    for (std::size_t col = 0; col < keys.size(); ++col) {
      std::optional<std::size_t> pick;
      for (auto i : occupancy[col])
        if (!used[i]) {
          pick = i;
          break;
        }
      if (!pick) continue;
      const std::size_t p = *pick;
      used[p] = true;
      pivot_row[col] = p;

      const Rational inv = rows[p].at(col).inverse();
      for (auto& [c, v] : rows[p]) v *= inv;
      rhs[p] *= inv;

      const std::vector<std::size_t> targets(occupancy[col].begin(), occupancy[col].end());
      for (auto i : targets) {
        if (i == p) continue;
        const Rational factor = rows[i].at(col);
        for (auto& [c, v] : rows[p]) {
          auto it = rows[i].find(c);
          if (it == rows[i].end()) {
            rows[i].emplace(c, -factor * v);
            occupancy[c].insert(i);
          } else {
            it->second -= factor * v;
            if (it->second.is_zero()) {
              rows[i].erase(it);
              occupancy[c].erase(i);
            }
          }
        }
        rhs[i] -= factor * rhs[p];
      }
    }

    Solution sol;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].empty() && !rhs[i].is_zero()) sol.consistent = false;
    for (std::size_t col = 0; col < keys.size(); ++col) {
      if (pivot_row[col] && rows[*pivot_row[col]].size() == 1)
        sol.determined.emplace(keys[col], rhs[*pivot_row[col]]);
      else
        sol.free.insert(keys[col]);
    }
    return sol;
  }

 private:
  std::set<Key> unknowns_;
  std::vector<LinearEquation<Key>> equations_;
};

}  // namespace rspin
