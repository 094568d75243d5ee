#pragma once

// Shared vocabulary: error types, canonical bracket keys, selection and
// vanishing rules, and the evaluation result type.

#include "rspin/rational.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rspin {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A twist a_i outside [0, r-1], or r < 2.
struct InvalidGrading : Error {
  using Error::Error;
};

// A DR bracket whose k-list does not sum to zero or is identically zero.
struct InvalidStructure : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

// Exact elimination left the requested genus-0 bracket free.
struct Underdetermined : Error {
  using Error::Error;
};

// Neither the relational rewriting nor the window system fixed a DR bracket.
struct ReductionStalled : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ContractError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Evaluation result
// ---------------------------------------------------------------------------

enum class Status { ok, dimension_mismatch_zero, vanishing_axiom_zero };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::dimension_mismatch_zero: return "dimension-mismatch-zero";
    case Status::vanishing_axiom_zero: return "vanishing-axiom-zero";
  }
  return "?";
}

struct EvalResult {
  Rational value;
  Status status = Status::ok;
  std::vector<std::string> trace;

  static EvalResult zero(Status s, std::string rule) {
    return EvalResult{Rational(0), s, {std::move(rule)}};
  }
};

// ---------------------------------------------------------------------------
// Grading rules
// ---------------------------------------------------------------------------

inline void check_r(int r) {
  if (r < 2) throw InvalidGrading("r must be at least 2, got " + std::to_string(r));
}

inline void check_grading(int r, std::span<const int> a) {
  check_r(r);
  for (int x : a)
    if (x < 0 || x > r - 1)
      throw InvalidGrading("twist " + std::to_string(x) + " outside [0, " + std::to_string(r - 1) + "]");
}

inline long sum_of(std::span<const int> a) { return std::accumulate(a.begin(), a.end(), 0L); }

// Insertion tau_{d,a}: psi power d, twist a.
struct Insertion {
  int d = 0;
  int a = 0;
};

// Solves (r+1)(2g-2+n) = sum(r d_i + a_i + 1) for an integer g >= 0.
inline std::optional<int> genus_of(int r, std::span<const Insertion> ins) {
  check_r(r);
  long rhs = 0;
  for (auto [d, a] : ins) {
    if (d < 0 || a < 0 || a > r - 1) throw InvalidGrading("insertion out of range");
    rhs += static_cast<long>(r) * d + a + 1;
  }
  const long n = static_cast<long>(ins.size());
  if (rhs % (r + 1) != 0) return std::nullopt;
  long twice = rhs / (r + 1) + 2 - n;  // = 2g
  if (twice < 0 || twice % 2 != 0) return std::nullopt;
  return static_cast<int>(twice / 2);
}

// Degree of Witten's class equals n-3 on M_{0,n}.
inline bool genus0_selection(int r, std::span<const int> a) {
  check_grading(r, a);
  const long n = static_cast<long>(a.size());
  return sum_of(a) == (n - 2) * r - 2;
}

// Degree of Witten's class equals n-1, the dimension of a genus-1 DR divisor.
inline bool dr1_selection(int r, std::span<const int> a) {
  check_grading(r, a);
  const long n = static_cast<long>(a.size());
  return sum_of(a) == (n - 1) * r;
}

inline bool spin_divisibility(int r, int g, std::span<const int> a) {
  check_r(r);
  const long v = 2L * g - 2 - sum_of(a);
  return v % r == 0;
}

inline bool vanishing_by_axiom(int r, std::span<const int> a) {
  return std::find(a.begin(), a.end(), r - 1) != a.end();
}

// ---------------------------------------------------------------------------
// List formatting / parsing
// ---------------------------------------------------------------------------

inline std::string join(std::span<const int> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

inline int parse_int(std::string_view s) {
  int v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError("not an integer: '" + std::string(s) + "'");
  return v;
}

// Comma-separated signed integers; the empty string is the empty list.
inline std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(parse_int(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Genus-0 key
// ---------------------------------------------------------------------------

struct Genus0Key {
  int r = 2;
  std::vector<int> a;  // ascending

  static Genus0Key make(int r, std::span<const int> a) {
    check_grading(r, a);
    Genus0Key k{r, {a.begin(), a.end()}};
    std::sort(k.a.begin(), k.a.end());
    return k;
  }

  std::size_t size() const { return a.size(); }
  std::string str() const { return "g0:r=" + std::to_string(r) + ":a=" + join(a); }

  friend auto operator<=>(const Genus0Key&, const Genus0Key&) = default;
};

// ---------------------------------------------------------------------------
// Genus-1 DR key
// ---------------------------------------------------------------------------

struct DrEntry {
  int k = 0;
  int a = 0;
  friend auto operator<=>(const DrEntry&, const DrEntry&) = default;
};

class DR1Key {
 public:
  // Validates structure and grading and returns the canonical representative:
  // entries ordered by k descending (ties by a ascending), with the global sign
  // chosen so the positive side carries the lexicographically larger
  // descending |k| profile. Ties fall back to the larger entry sequence.
  static DR1Key make(int r, std::span<const int> k, std::span<const int> a) {
    if (k.size() != a.size()) throw InvalidStructure("k and a lists differ in length");
    check_grading(r, a);
    if (k.empty()) throw InvalidStructure("empty DR bracket");
    if (sum_of(k) != 0) throw InvalidStructure("k entries must sum to 0");
    if (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; }))
      throw InvalidStructure("at least one k entry must be nonzero");
    std::vector<DrEntry> e;
    for (std::size_t i = 0; i < k.size(); ++i) e.push_back({k[i], a[i]});
    return DR1Key(r, canonical(std::move(e)));
  }

  static DR1Key make(int r, std::span<const DrEntry> entries) {
    std::vector<int> k, a;
    for (auto [ki, ai] : entries) {
      k.push_back(ki);
      a.push_back(ai);
    }
    return make(r, k, a);
  }

  int r() const { return r_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<DrEntry>& entries() const { return entries_; }

  std::vector<int> k() const {
    std::vector<int> out;
    for (auto& e : entries_) out.push_back(e.k);
    return out;
  }
  std::vector<int> a() const {
    std::vector<int> out;
    for (auto& e : entries_) out.push_back(e.a);
    return out;
  }

  int n_plus() const { return count_if([](int k) { return k > 0; }); }
  int n_zero() const { return count_if([](int k) { return k == 0; }); }
  int n_minus() const { return count_if([](int k) { return k < 0; }); }
  long abs_k_sum() const {
    long s = 0;
    for (auto& e : entries_) s += std::abs(e.k);
    return s;
  }

  std::string str() const {
    return "dr1:r=" + std::to_string(r_) + ":k=" + join(k()) + ":a=" + join(a());
  }

  friend auto operator<=>(const DR1Key&, const DR1Key&) = default;

 private:
  DR1Key(int r, std::vector<DrEntry> e) : r_(r), entries_(std::move(e)) {}

  template <class Pred>
  int count_if(Pred p) const {
    return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                          [&](const DrEntry& e) { return p(e.k); }));
  }

  static void sort_entries(std::vector<DrEntry>& e) {
    std::sort(e.begin(), e.end(), [](const DrEntry& x, const DrEntry& y) {
      if (x.k != y.k) return x.k > y.k;
      return x.a < y.a;
    });
  }

  static std::vector<int> profile(const std::vector<DrEntry>& e, int sign) {
    std::vector<int> p;
    for (auto& x : e)
      if (x.k * sign > 0) p.push_back(std::abs(x.k));
    std::sort(p.rbegin(), p.rend());
    return p;
  }

  static std::vector<DrEntry> canonical(std::vector<DrEntry> e) {
    auto flipped = e;
    for (auto& x : flipped) x.k = -x.k;
    sort_entries(e);
    sort_entries(flipped);
    auto pos = profile(e, +1);
    auto neg = profile(e, -1);
    if (pos != neg) return pos > neg ? e : flipped;
    return std::max(e, flipped);
  }

  int r_ = 2;
  std::vector<DrEntry> entries_;
};

// ---------------------------------------------------------------------------
// Key strings
// ---------------------------------------------------------------------------

using BracketKey = std::variant<Genus0Key, DR1Key>;

inline std::string key_string(const BracketKey& key) {
  return std::visit([](const auto& k) { return k.str(); }, key);
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view field(std::string_view part, std::string_view name, std::string_view text) {
  if (part.substr(0, name.size()) != name || part.size() < name.size() + 1 || part[name.size()] != '=')
    throw ParseError("expected field '" + std::string(name) + "' in key '" + std::string(text) + "'");
  return part.substr(name.size() + 1);
}

}  // namespace detail

// Parses a key string and canonicalizes it. Use is_canonical_key_string to
// check that the input was already canonical.
inline BracketKey parse_key(std::string_view text) {
  auto parts = detail::split(text, ':');
  try {
    if (parts.size() == 3 && parts[0] == "g0") {
      int r = parse_int(detail::field(parts[1], "r", text));
      auto a = parse_int_list(detail::field(parts[2], "a", text));
      return Genus0Key::make(r, a);
    }
    if (parts.size() == 4 && parts[0] == "dr1") {
      int r = parse_int(detail::field(parts[1], "r", text));
      auto k = parse_int_list(detail::field(parts[2], "k", text));
      auto a = parse_int_list(detail::field(parts[3], "a", text));
      return DR1Key::make(r, k, a);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("invalid key '" + std::string(text) + "': " + e.what());
  }
  throw ParseError("unrecognized key '" + std::string(text) + "'");
}

inline bool is_canonical_key_string(std::string_view text) {
  try {
    return key_string(parse_key(text)) == text;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace rspin
