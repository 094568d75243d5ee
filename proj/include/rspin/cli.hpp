#pragma once

// Command-line front end. run() is the whole program; tools/rspin.cpp only
// forwards argv.

#include "rspin/core.hpp"
#include "rspin/dr1.hpp"
#include "rspin/genus0.hpp"
#include "rspin/store.hpp"
#include "rspin/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rspin::cli {

enum ExitCode : int {
  ok = 0,
  suite_failure = 1,
  disagreement = 2,
  usage = 64,
  invalid_input = 65,
  unsolved = 70,
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Options {
  std::string format = "text";
  std::string cache_path;
  bool no_cache = false;

  int r = 0;
  int m = 0;
  std::string a, k, x;
  bool extended = false;
  std::string method = "both";
  std::string suite = "all";
  std::string kind = "g0";
  VerifyBounds bounds;
};

class Session {
 public:
  Session(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

  void open_cache() {
    if (opt_.no_cache) return;
    path_ = opt_.cache_path.empty() ? default_cache_path() : std::filesystem::path(opt_.cache_path);
    cache_ = CacheStore::load_or_empty(*path_);
  }

  void close_cache() {
    if (cache_ && path_ && cache_->dirty()) cache_->save(*path_);
  }

  CacheStore* cache() { return cache_ ? &*cache_ : nullptr; }

  int g0() {
    const auto a = parse_int_list(opt_.a);
    Genus0Solver solver(cache());
    auto key = Genus0Key::make(opt_.r, a);
    auto res = solver.solve_bracket(opt_.r, a);
    emit_single(key.str(), res, "wdvv");
    return ok;
  }

  int loopsum() {
    const auto x = parse_int_list(opt_.x);
    auto v = loop_sum(opt_.r, opt_.m, x, opt_.extended);
    const std::string key = "loop:r=" + std::to_string(opt_.r) + ":m=" + std::to_string(opt_.m) + ":x=" + join(x);
    emit_single(key, EvalResult{v, Status::ok, {"loop-sum"}}, "formula");
    return ok;
  }

  int b() {
    const auto a = parse_int_list(opt_.a);
    const std::string key = "b:r=" + std::to_string(opt_.r) + ":a=" + join(a);
    emit_single(key, b_value(opt_.r, a), "closed");
    return ok;
  }

  int dr1() {
    const auto key = DR1Key::make(opt_.r, parse_int_list(opt_.k), parse_int_list(opt_.a));
    std::vector<std::pair<std::string, EvalResult>> results;
    if (opt_.method == "closed" || opt_.method == "both") results.emplace_back("closed", closed_form(key));
    if (opt_.method == "relations" || opt_.method == "both") {
      RelationalSolver solver;
      results.emplace_back("relations", solver.solve(key));
    }
    const bool agree = results.size() < 2 || results[0].second.value == results[1].second.value;
    if (agree && cache()) cache()->put(key.str(), results.front().second.value);

    if (opt_.format == "json") {
      nlohmann::ordered_json j;
      j["key"] = key.str();
      j["value"] = results.front().second.value.str();
      j["status"] = to_string(results.front().second.status);
      auto& methods = j["methods"] = nlohmann::ordered_json::object();
      for (auto& [name, res] : results) methods[name] = {{"value", res.value.str()}, {"trace", res.trace}};
      j["agree"] = agree;
      out_ << j.dump(2) << "\n";
    } else if (opt_.format == "csv") {
      out_ << "key,method,value,status\n";
      for (auto& [name, res] : results)
        out_ << csv_field(key.str()) << "," << name << "," << res.value.str() << "," << to_string(res.status) << "\n";
    } else if (results.size() == 1) {
      out_ << results[0].second.value.pretty() << "\n";
    } else {
      for (auto& [name, res] : results) out_ << name << ": " << res.value.pretty() << "\n";
    }
    if (!agree) {
      err_ << "methods disagree on " << key.str() << "\n";
      return disagreement;
    }
    return ok;
  }

  int verify() {
    auto reports = run_suites(opt_.suite, opt_.bounds, cache());
    bool passed = true;
    for (auto& r : reports) passed &= r.passed();
    if (opt_.format == "json") {
      auto j = nlohmann::ordered_json::array();
      for (auto& r : reports) j.push_back(r.to_json());
      out_ << (reports.size() == 1 ? j[0] : j).dump(2) << "\n";
    } else if (opt_.format == "csv") {
      out_ << "suite,cases,failures,elapsed_ms\n";
      for (auto& r : reports)
        out_ << r.suite << "," << r.cases << "," << r.failures.size() << "," << r.elapsed.count() << "\n";
    } else {
      for (auto& r : reports) {
        out_ << (r.passed() ? "PASS " : "FAIL ") << r.suite << ": " << r.cases << " cases, " << r.failures.size()
             << " failures, " << r.elapsed.count() << " ms\n";
        for (auto& f : r.failures)
          out_ << "  " << f.key << " expected " << f.expected.pretty() << " got " << f.got.pretty()
               << (f.note.empty() ? "" : " (" + f.note + ")") << "\n";
      }
    }
    return passed ? ok : suite_failure;
  }

  int table() {
    const auto& bd = opt_.bounds;
    struct Row {
      std::string key;
      int r;
      std::vector<int> k, a;
      EvalResult res;
    };
    std::vector<Row> rows;
    if (opt_.kind == "g0") {
      Genus0Solver solver(cache());
      for (int r = 2; r <= bd.r_max; ++r)
        for (int n = 3; n <= bd.n_max; ++n)
          for_each_multiset(n, 0, r - 1, static_cast<long>(n - 2) * r - 2, [&](const std::vector<int>& a) {
            rows.push_back({Genus0Key{r, a}.str(), r, {}, a, solver.solve_bracket(r, a)});
          });
    } else if (opt_.kind == "dr1") {
      std::set<DR1Key> keys;
      for (int r = 2; r <= bd.r_max; ++r)
        for (int n = 2; n <= bd.n_max; ++n)
          for_each_multiset(n, 0, r - 1, static_cast<long>(n - 1) * r, [&](const std::vector<int>& a) {
            for_each_zero_sum_vector(n, bd.k_sum_max,
                                     [&](const std::vector<int>& k) { keys.insert(DR1Key::make(r, k, a)); });
          });
      for (auto& key : keys) rows.push_back({key.str(), key.r(), key.k(), key.a(), closed_form(key)});
    } else {
      throw ParseError("unknown table kind '" + opt_.kind + "'");
    }
    const bool dr = opt_.kind == "dr1";
    if (opt_.format == "json") {
      auto j = nlohmann::ordered_json::array();
      for (auto& row : rows) {
        nlohmann::ordered_json e;
        e["key"] = row.key;
        e["r"] = row.r;
        if (dr) e["k"] = row.k;
        e["a"] = row.a;
        e["value"] = row.res.value.str();
        e["status"] = to_string(row.res.status);
        j.push_back(std::move(e));
      }
      out_ << j.dump(1) << "\n";
    } else if (opt_.format == "csv") {
      out_ << (dr ? "r,k,a,value\n" : "r,a,value\n");
      for (auto& row : rows) {
        out_ << row.r << ",";
        if (dr) out_ << csv_field(join(row.k)) << ",";
        out_ << csv_field(join(row.a)) << "," << row.res.value.str() << "\n";
      }
    } else {
      for (auto& row : rows) out_ << row.key << " " << row.res.value.pretty() << "\n";
    }
    return ok;
  }

 private:
  void emit_single(const std::string& key, const EvalResult& res, const std::string& method) {
    if (opt_.format == "json") {
      nlohmann::ordered_json j;
      j["key"] = key;
      j["value"] = res.value.str();
      j["status"] = to_string(res.status);
      j["method"] = method;
      j["trace"] = res.trace;
      out_ << j.dump(2) << "\n";
    } else if (opt_.format == "csv") {
      out_ << "key,value,status\n" << csv_field(key) << "," << res.value.str() << "," << to_string(res.status) << "\n";
    } else {
      out_ << res.value.pretty() << "\n";
    }
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<std::filesystem::path> path_;
  std::optional<CacheStore> cache_;
};

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  detail::Options opt;
  CLI::App app{"Exact r-spin intersection numbers: genus-0 correlators and genus-1 DR brackets", "rspin"};
  app.require_subcommand(1);
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--cache", opt.cache_path, "Cache file (default $RSPIN_CACHE or ~/.cache/rspin/cache.json)");
  app.add_flag("--no-cache", opt.no_cache, "Do not read or write the cache");

  auto r_opt = [&](CLI::App* sub) { sub->add_option("--r", opt.r, "r >= 2")->required(); };

  auto* g0 = app.add_subcommand("g0", "Genus-0 primary correlator <a_1, ..., a_n>");
  r_opt(g0);
  g0->add_option("--a", opt.a, "Comma-separated twists")->required();

  auto* loop = app.add_subcommand("loopsum", "Closed loop sum sum_{a+b=m} <a, b, x_1, ..., x_n>");
  r_opt(loop);
  loop->add_option("--m", opt.m, "m")->required();
  loop->add_option("--x", opt.x, "Comma-separated x_i")->required();
  loop->add_flag("--extended", opt.extended, "Allow r-2 < m <= r when n >= 2");

  auto* dr1 = app.add_subcommand("dr1", "Genus-1 double ramification bracket");
  r_opt(dr1);
  dr1->add_option("--k", opt.k, "Comma-separated k_i, summing to 0")->required();
  dr1->add_option("--a", opt.a, "Comma-separated twists")->required();
  dr1->add_option("--method", opt.method, "closed|relations|both")
      ->check(CLI::IsMember({"closed", "relations", "both"}));

  auto* b = app.add_subcommand("b", "Genus-1 one-psi correlator B = <tau_{1,a_1} tau_{0,a_2} ...>");
  r_opt(b);
  b->add_option("--a", opt.a, "Comma-separated twists")->required();

  auto add_bounds = [&](CLI::App* sub) {
    sub->add_option("--r-max", opt.bounds.r_max, "Largest r")->check(CLI::Range(2, 64));
    sub->add_option("--n-max", opt.bounds.n_max, "Largest point count")->check(CLI::Range(1, 32));
    sub->add_option("--k-sum-max", opt.bounds.k_sum_max, "Largest sum |k_i|")->check(CLI::Range(2, 64));
  };

  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("--suite", opt.suite, "all|loop|relations|oracle|axioms")
      ->check(CLI::IsMember({"all", "loop", "relations", "oracle", "axioms"}));
  ver->add_flag("--extended", opt.bounds.extended, "Include the extended loop-sum range r-2 < m <= r");
  add_bounds(ver);

  auto* tab = app.add_subcommand("table", "Enumerate all selection-valid brackets in a window");
  tab->add_option("--kind", opt.kind, "g0|dr1")->check(CLI::IsMember({"g0", "dr1"}));
  add_bounds(tab);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return usage;
  }

  detail::Session session(opt, out, err);
  try {
    session.open_cache();
  } catch (const Error& e) {
    err << "cache: " << e.what() << "\n";
    return invalid_input;
  }
  try {
    int code = ok;
    if (*g0) code = session.g0();
    else if (*loop) code = session.loopsum();
    else if (*dr1) code = session.dr1();
    else if (*b) code = session.b();
    else if (*ver) code = session.verify();
    else if (*tab) code = session.table();
    session.close_cache();
    return code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const InvalidGrading& e) {
    err << "invalid grading: " << e.what() << "\n";
    return invalid_input;
  } catch (const InvalidStructure& e) {
    err << "invalid structure: " << e.what() << "\n";
    return invalid_input;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << "\n";
    return invalid_input;
  } catch (const Underdetermined& e) {
    err << "underdetermined: " << e.what() << "\n";
    return unsolved;
  } catch (const ReductionStalled& e) {
    err << "reduction-stalled: " << e.what() << "\n";
    return unsolved;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return unsolved;
  }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace rspin::cli
