#include "cwlab/cli.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cwlab/cache.hpp"
#include "cwlab/codes.hpp"
#include "cwlab/codewords.hpp"
#include "cwlab/descsys.hpp"
#include "cwlab/errors.hpp"

namespace cwlab::cli {
namespace {

// Largest n for which the table's max_code column is searched exactly by default.
constexpr int kAutoExactMaxN = 5;

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

struct Options {
  std::string n = "";
  std::string e = "0";
  std::string lambda = "0";
  std::string level = "";
  std::string method = "";
  std::string format = "";
  std::string cache_dir;
  std::string output;
  std::string x;
  std::string y;
  std::string which;
  int lmax = kDefaultEnumerationCap;
  int workers = 1;
  int nmax = kDefaultNMax;
  std::uint64_t seed = 1;
  int random_codes = 0;
};

struct GridPoint {
  int n;
  int e;
  int lambda;
};

std::vector<GridPoint> make_grid(const Options& o) {
  if (o.n.empty()) throw ParameterError("-n is required");
  std::vector<GridPoint> grid;
  for (int n : parse_span(o.n)) {
    if (n < 1 || n > o.nmax) throw ParameterError("grid n must lie in [1, N_MAX]");
    for (int e : parse_span(o.e)) {
      if (e < 0) throw ParameterError("grid e must be non-negative");
      if (e > n) continue;
      for (int lambda : parse_span(o.lambda)) {
        if (lambda < 0) throw ParameterError("grid lambda must be non-negative");
        grid.push_back({n, e, lambda});
      }
    }
  }
  return grid;
}

std::vector<Level> parse_levels(const std::string& text) {
  std::vector<Level> out;
  for (int l : parse_span(text)) {
    if (l != 0 && l != 1) throw ParameterError("--level must be 0 or 1");
    out.push_back(static_cast<Level>(l));
  }
  return out;
}

// Owns the description system and, when configured, the persistent cache
// around one command invocation.
class Session {
 public:
  explicit Session(const Options& o) {
    SystemConfig config;
    config.n_max = o.nmax;
    config.workers = o.workers;
    if (o.workers < 1) throw ParameterError("--workers must be at least 1");
    sys_ = std::make_unique<DescriptionSystem>(config);

    std::string dir = o.cache_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("CODEWORD_LAB_CACHE")) dir = env;
    }
    if (!dir.empty()) {
      cache_.emplace(dir);
      cache_->load();
      sys_->preload(cache_->snapshot_for(config));
    }
  }

  const DescriptionSystem& sys() const { return *sys_; }

  void persist() {
    if (!cache_) return;
    cache_->absorb(sys_->snapshot(), sys_->config());
    cache_->save();
  }

 private:
  std::unique_ptr<DescriptionSystem> sys_;
  std::optional<ResultCache> cache_;
};

// Runs tasks over a worker pool; results come back in task order.
std::vector<std::string> run_ordered(int workers, std::vector<std::function<std::string()>>& tasks) {
  std::vector<std::string> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::trunc);
  if (!f) throw ParameterError("cannot open output file " + o.output);
  f << text;
}

int cmd_kc(const Options& o, std::ostream& out) {
  const auto levels = parse_levels(o.level.empty() ? "0" : o.level);
  if (levels.size() != 1) throw ParameterError("kc takes a single --level");
  Session session(o);
  const auto x = Word::parse(o.x);
  const auto y = Word::parse(o.y);
  const auto result = session.sys().complexity(levels.front(), x, y, o.lmax);
  const std::string value = result.value ? std::to_string(*result.value) : "ABSENT";
  const std::string witness = result.witness ? result.witness->bits() : "";
  if (o.format == "json") {
    nlohmann::ordered_json j{{"level", static_cast<int>(levels.front())},
                             {"x", x.str()},
                             {"y", y.str()},
                             {"max_length", o.lmax},
                             {"value", result.value ? nlohmann::ordered_json(*result.value) : nlohmann::ordered_json(nullptr)},
                             {"witness", result.witness ? nlohmann::ordered_json(witness) : nlohmann::ordered_json(nullptr)},
                             {"version_tag", session.sys().config().version_tag}};
    out << j.dump() << '\n';
  } else if (o.format.empty() || o.format == "text") {
    out << "value " << value << '\n' << "witness " << (result.witness ? witness : std::string("-")) << '\n';
  } else {
    throw ParameterError("kc supports --format text|json");
  }
  session.persist();
  return kOk;
}

int cmd_table(const Options& o, std::ostream& out) {
  const auto grid = make_grid(o);
  const std::string method = o.method.empty() ? "auto" : o.method;
  if (method != "auto" && method != "greedy" && method != "branch_and_bound" && method != "exhaustive") {
    throw ParameterError("table --method must be auto|greedy|branch_and_bound|exhaustive");
  }
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format != "csv" && format != "json" && format != "text") throw ParameterError("table supports --format csv|json|text");
  Session session(o);
  const auto& sys = session.sys();

  struct Row {
    GridPoint p;
    std::size_t codewords;
    std::size_t greedy;
    std::size_t max_code;
    std::string max_method;
    std::uint64_t bound;
  };
  std::vector<Row> rows(grid.size());
  std::vector<std::function<std::string()>> tasks;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tasks.emplace_back([&, i] {
      const auto p = grid[i];
      const CodeParams params(p.n, p.e, p.lambda);
      Row r{p, sys.level0_codeword_set(p.n, p.e, p.lambda).size(), sys.greedy_code(p.n, p.e, p.lambda).size(), 0, "",
            counting_bound(params)};
      std::string m = method;
      if (m == "auto") m = p.n <= kAutoExactMaxN ? "branch_and_bound" : "greedy";
      if (m == "greedy") {
        r.max_code = r.greedy;
        r.max_method = "greedy";
      } else {
        r.max_code =
            max_code_size(params, m == "exhaustive" ? SearchMethod::exhaustive : SearchMethod::branch_and_bound).size;
        r.max_method = m;
      }
      rows[i] = r;
      return std::string();
    });
  }
  run_ordered(o.workers, tasks);

  std::ostringstream os;
  if (format == "json") {
    for (const auto& r : rows) {
      os << nlohmann::ordered_json{{"n", r.p.n},
                                   {"e", r.p.e},
                                   {"lambda", r.p.lambda},
                                   {"codewords", r.codewords},
                                   {"greedy_size", r.greedy},
                                   {"max_code", r.max_code},
                                   {"max_code_method", r.max_method},
                                   {"counting_bound", r.bound},
                                   {"version_tag", sys.config().version_tag}}
                .dump()
         << '\n';
    }
  } else {
    const char sep = format == "csv" ? ',' : ' ';
    os << "n" << sep << "e" << sep << "lambda" << sep << "codewords" << sep << "greedy_size" << sep << "max_code" << sep
       << "max_code_method" << sep << "counting_bound\n";
    for (const auto& r : rows) {
      os << r.p.n << sep << r.p.e << sep << r.p.lambda << sep << r.codewords << sep << r.greedy << sep << r.max_code
         << sep << r.max_method << sep << r.bound << '\n';
    }
  }
  write_output(o, os.str(), out);
  session.persist();
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::string& which = o.which;
  const bool all = which == "all";
  if (!all && which != "prop1" && which != "prop2" && which != "prop3" && which != "prop4") {
    throw ParameterError("check target must be prop1|prop2|prop3|prop4|all");
  }
  const std::string format = o.format.empty() ? "text" : o.format;
  if (format != "text" && format != "json") throw ParameterError("check supports --format text|json");
  if (o.random_codes < 0) throw ParameterError("--random-codes must be non-negative");
  const auto grid = make_grid(o);
  const auto levels = parse_levels(o.level.empty() ? "0..1" : o.level);
  Session session(o);
  const auto& sys = session.sys();

  std::vector<CheckReport> reports;
  std::vector<std::function<CheckReport()>> jobs;
  if (all || which == "prop1") {
    for (auto p : grid) {
      for (auto level : levels) jobs.emplace_back([&sys, p, level] { return check_prop1(sys, level, p.n, p.e, p.lambda); });
    }
  }
  if (all || which == "prop2") {
    for (auto p : grid) {
      jobs.emplace_back([&sys, p] { return check_prop2(sys, sys.greedy_code(p.n, p.e, p.lambda), p.e, p.lambda); });
      for (int i = 0; i < o.random_codes; ++i) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
        jobs.emplace_back([&sys, p, seed] {
          const Code code = random_list_decodable_code(CodeParams(p.n, p.e, p.lambda), seed);
          if (code.empty()) {
            return check_prop2(sys, sys.greedy_code(p.n, p.e, p.lambda), p.e, p.lambda);
          }
          auto r = check_prop2(sys, code, p.e, p.lambda);
          r.note = "random code, seed " + std::to_string(seed);
          return r;
        });
      }
    }
  }
  if (all || which == "prop3") {
    for (auto p : grid) jobs.emplace_back([&sys, p] { return check_prop3(sys, p.n, p.e, p.lambda); });
  }
  if (all || which == "prop4") {
    for (auto p : grid) jobs.emplace_back([&sys, p] { return check_prop4(sys, p.n, p.e, p.lambda); });
  }

  reports.resize(jobs.size());
  std::vector<std::function<std::string()>> tasks;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    tasks.emplace_back([&, i] {
      reports[i] = jobs[i]();
      return std::string();
    });
  }
  run_ordered(o.workers, tasks);

  std::size_t passed = 0;
  std::size_t vacuous = 0;
  std::ostringstream os;
  for (const auto& r : reports) {
    passed += r.pass;
    vacuous += r.vacuous;
    os << (format == "json" ? r.to_json().dump() : r.to_text()) << '\n';
  }
  const std::size_t failed = reports.size() - passed;
  if (format == "text") {
    os << "summary total=" << reports.size() << " passed=" << passed << " failed=" << failed << " vacuous=" << vacuous
       << '\n';
  }
  write_output(o, os.str(), out);
  session.persist();
  return failed == 0 ? kOk : kCheckFailed;
}

int single(const std::string& text, const char* what) {
  const auto values = parse_span(text);
  if (values.size() != 1) throw ParameterError(std::string(what) + " takes a single value");
  return values.front();
}

int cmd_search(const Options& o, std::ostream& out) {
  if (o.n.empty()) throw ParameterError("-n is required");
  const CodeParams params(single(o.n, "-n"), single(o.e, "-e"), single(o.lambda, "--lambda"));
  if (params.n > o.nmax) throw ParameterError("n exceeds N_MAX");
  const std::string method = o.method.empty() ? "greedy" : o.method;
  Code code(params.n);
  std::string how;
  if (method == "greedy") {
    code = greedy_lex_code(params);
    how = "greedy";
  } else if (method == "exhaustive") {
    code = max_code_size(params, SearchMethod::exhaustive).witness;
    how = "exhaustive";
  } else if (method == "branch_and_bound") {
    code = max_code_size(params, SearchMethod::branch_and_bound).witness;
    how = "branch_and_bound";
  } else {
    throw ParameterError("search --method must be greedy|exhaustive|branch_and_bound");
  }
  std::string header = "# (e,2^lambda)-list-decodable code: e=" + std::to_string(params.e) +
                       " lambda=" + std::to_string(params.lambda) + " method=" + how +
                       " size=" + std::to_string(code.size()) + "\n";
  write_output(o, header + format_code(code), out);
  return kOk;
}

int cmd_codewords(const Options& o, std::ostream& out) {
  if (o.n.empty()) throw ParameterError("-n is required");
  const auto levels = parse_levels(o.level.empty() ? "0" : o.level);
  if (levels.size() != 1) throw ParameterError("codewords takes a single --level");
  const int n = single(o.n, "-n");
  const int e = single(o.e, "-e");
  const int lambda = single(o.lambda, "--lambda");
  Session session(o);
  const Code words = codeword_set(session.sys(), levels.front(), n, e, lambda);
  std::string header = "# level-" + std::to_string(static_cast<int>(levels.front())) + " codewords: e=" +
                       std::to_string(e) + " lambda=" + std::to_string(lambda) + " size=" +
                       std::to_string(words.size()) + " version=" + session.sys().config().version_tag + "\n";
  write_output(o, header + format_code(words), out);
  session.persist();
  return kOk;
}

}  // namespace

std::vector<int> parse_span(std::string_view text) {
  auto dots = text.find("..");
  if (dots == std::string_view::npos) return {parse_int(text)};
  const int lo = parse_int(text.substr(0, dots));
  const int hi = parse_int(text.substr(dots + 2));
  if (lo > hi) throw ParameterError("empty span '" + std::string(text) + "'");
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact laboratory for list-decodable codes and complexity-defined codewords"};
  app.require_subcommand(1);
  Options o;

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("-n", o.n, "word length (value or a..b)");
    sub->add_option("-e", o.e, "radius (value or a..b)");
    sub->add_option("--lambda", o.lambda, "log2 of the list size (value or a..b)");
    sub->add_option("--nmax", o.nmax, "maximum word length N_MAX")->check(CLI::Range(0, kWordCeiling));
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--cache-dir", o.cache_dir, "result cache directory (default $CODEWORD_LAB_CACHE)");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* kc = app.add_subcommand("kc", "exact K_level(x|y) with a witness program");
  kc->add_option("--level", o.level, "description level 0 or 1");
  kc->add_option("-x", o.x, "target word")->required();
  kc->add_option("-y", o.y, "condition word (empty for unconditional)");
  kc->add_option("--lmax", o.lmax, "program length bound");
  kc->add_option("--format", o.format, "text|json");
  kc->add_option("--nmax", o.nmax, "maximum word length N_MAX")->check(CLI::Range(0, kWordCeiling));
  add_run(kc);

  auto* table = app.add_subcommand("table", "codeword counts and code sizes over a grid");
  add_grid(table);
  add_run(table);
  table->add_option("--method", o.method, "auto|greedy|branch_and_bound|exhaustive");
  table->add_option("--format", o.format, "csv|json|text");
  table->add_option("-o,--output", o.output, "output file");

  auto* check = app.add_subcommand("check", "verify the four propositions over a grid");
  check->add_option("which", o.which, "prop1|prop2|prop3|prop4|all")->required();
  add_grid(check);
  add_run(check);
  check->add_option("--level", o.level, "levels for prop1 (value or a..b, default 0..1)");
  check->add_option("--format", o.format, "text|json");
  check->add_option("--seed", o.seed, "seed for random prop2 codes");
  check->add_option("--random-codes", o.random_codes, "random list-decodable codes per grid point for prop2");
  check->add_option("-o,--output", o.output, "output file");

  auto* search = app.add_subcommand("search", "emit a greedy or maximum list-decodable code");
  add_grid(search);
  search->add_option("--method", o.method, "greedy|exhaustive|branch_and_bound");
  search->add_option("-o,--output", o.output, "output file");

  auto* codewords = app.add_subcommand("codewords", "emit the codeword set W_level(n,e,lambda)");
  add_grid(codewords);
  add_run(codewords);
  codewords->add_option("--level", o.level, "description level 0 or 1");
  codewords->add_option("-o,--output", o.output, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kParameterError;
  }

  try {
    if (kc->parsed()) return cmd_kc(o, out);
    if (table->parsed()) return cmd_table(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (search->parsed()) return cmd_search(o, out);
    if (codewords->parsed()) return cmd_codewords(o, out);
  } catch (const ParameterError& ex) {
    err << "error: " << ex.what() << '\n';
    return kParameterError;
  } catch (const EmptySetError& ex) {
    err << "error: " << ex.what() << '\n';
    return kParameterError;
  } catch (const ResourceError& ex) {
    err << "error: " << ex.what() << '\n';
    return kResourceError;
  } catch (const IntegrityError& ex) {
    err << "error: " << ex.what() << '\n';
    return kIntegrityError;
  }
  return kParameterError;
}

}  // namespace cwlab::cli
