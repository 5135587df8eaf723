// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cwlab/cli.hpp"
#include "cwlab/codes.hpp"
#include "cwlab/codewords.hpp"
#include "cwlab/descsys.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace cwlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

std::string point(int n, int e, int lambda) {
  return "(n=" + std::to_string(n) + ",e=" + std::to_string(e) + ",lambda=" + std::to_string(lambda) + ")";
}

const DescriptionSystem& lab() {
  static const DescriptionSystem sys([] {
    SystemConfig c;
    c.verify_witnesses = true;
    c.workers = 4;
    return c;
  }());
  return sys;
}

Outcome prop1_suite() {
  Outcome o;
  std::size_t checked = 0;
  std::size_t vacuous = 0;
  for (int n = 2; n <= 8; ++n) {
    for (int e = 0; e <= std::min(2, n); ++e) {
      for (int lambda = 0; lambda <= n + 2; ++lambda) {
        for (auto level : {Level::zero, Level::one}) {
          const auto r = check_prop1(lab(), level, n, e, lambda);
          const Code w = codeword_set(lab(), level, n, e, lambda);
          const auto profile = list_profile(w, e);
          o.expect(r.pass && static_cast<long long>(profile) == r.observed &&
                       profile <= (std::uint64_t{1} << (lambda + 1)) - 1,
                   "prop1 " + point(n, e, lambda) + " profile " + std::to_string(profile));
          ++checked;
          vacuous += r.vacuous;
        }
      }
    }
  }
  o.detail = std::to_string(checked) + " grid points, " + std::to_string(vacuous) + " vacuous";
  return o;
}

Outcome prop2_suite() {
  Outcome o;
  struct Case {
    Code code;
    int e;
    int lambda;
    std::string label;
  };
  std::vector<Case> cases;
  cases.push_back({Code::from_words(3, {Word::parse("000"), Word::parse("111")}), 1, 0, "repetition {000,111}"});
  for (int n = 1; n <= 6; ++n) {
    for (int e = 0; e <= std::min(2, n); ++e) {
      for (int lambda = 0; lambda <= 3; ++lambda) {
        cases.push_back({greedy_lex_code({n, e, lambda}), e, lambda, "greedy " + point(n, e, lambda)});
      }
    }
  }
  std::mt19937_64 rng(2026);
  int drawn = 0;
  for (std::uint64_t seed = 1; drawn < 20 && seed < 1000; ++seed) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int e = static_cast<int>(rng() % (std::min(2, n) + 1));
    const int lambda = static_cast<int>(rng() % 4);
    Code c = random_list_decodable_code({n, e, lambda}, seed);
    if (c.empty()) continue;
    ++drawn;
    cases.push_back({std::move(c), e, lambda, "random seed " + std::to_string(seed) + " " + point(n, e, lambda)});
  }
  std::size_t random_count = 0;
  for (const auto& c : cases) {
    random_count += c.label.starts_with("random");
    const auto r = check_prop2(lab(), c.code, c.e, c.lambda);
    const long long bound =
        3 + gnat_length(static_cast<std::uint64_t>(c.e)) + static_cast<long long>(set_encode(c.code).size()) + c.lambda;
    o.expect(r.pass && r.explicit_bound == bound && *r.witness_valid, "prop2 " + c.label);
  }
  o.expect(random_count == 20, "expected 20 random codes, got " + std::to_string(random_count));
  o.detail = std::to_string(cases.size()) + " codes (" + std::to_string(random_count) + " random)";
  return o;
}

Outcome prop3_sandwich() {
  Outcome o;
  std::size_t checked = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int e = 0; e <= std::min(2, n); ++e) {
      for (int lambda = 0; lambda <= 3; ++lambda) {
        const auto r = check_prop3(lab(), n, e, lambda);
        const long long upper = lambda + 4 + gnat_length(static_cast<std::uint64_t>(e)) +
                                gnat_length(static_cast<std::uint64_t>(lambda));
        const Code& code = lab().greedy_code(n, e, static_cast<std::uint64_t>(lambda));
        int floor_log = 0;
        while ((std::size_t{2} << floor_log) <= code.size()) ++floor_log;
        o.expect(r.pass && r.explicit_bound == upper && r.observed <= upper && *r.lower_bound == floor_log &&
                     *r.lower_observed >= floor_log && *r.witness_valid,
                 "prop3 " + point(n, e, lambda));
        ++checked;
      }
    }
  }
  o.detail = std::to_string(checked) + " grid points";
  return o;
}

Outcome prop4_suite() {
  Outcome o;
  std::size_t checked = 0;
  std::size_t vacuous = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int e = 0; e <= std::min(2, n); ++e) {
      for (int lambda = 0; lambda <= n + 2; ++lambda) {
        const auto r = check_prop4(lab(), n, e, lambda);
        ++checked;
        const std::size_t size = lab().level0_codeword_set(n, e, static_cast<std::uint64_t>(lambda)).size();
        if (size == 0) {
          o.expect(r.vacuous && r.pass, "prop4 vacuous flag " + point(n, e, lambda));
          ++vacuous;
          continue;
        }
        const long long bound = 4 + gnat_length(static_cast<std::uint64_t>(n)) +
                                gnat_length(static_cast<std::uint64_t>(e)) +
                                gnat_length(static_cast<std::uint64_t>(lambda)) + index_width(size);
        o.expect(r.pass && !r.vacuous && r.explicit_bound == bound && *r.witness_valid, "prop4 " + point(n, e, lambda));
      }
    }
  }
  o.detail = std::to_string(checked) + " grid points, " + std::to_string(vacuous) + " vacuous (reported as such)";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (int n = 0; n <= 4; ++n) {
    for (int e = 0; e <= n; ++e) {
      for (int lambda = 0; lambda <= 3; ++lambda) {
        const auto ex = max_code_size({n, e, lambda}, SearchMethod::exhaustive);
        const auto bb = max_code_size({n, e, lambda}, SearchMethod::branch_and_bound);
        o.expect(ex.size == bb.size, "exhaustive != branch_and_bound at " + point(n, e, lambda));
        o.expect(is_list_decodable(ex.witness, e, lambda) && is_list_decodable(bb.witness, e, lambda),
                 "witness not list-decodable at " + point(n, e, lambda));
        if (e == 0 || (std::uint64_t{1} << lambda) >= ball_volume(n, e)) {
          o.expect(ex.size == (std::size_t{1} << n), "A != 2^n at " + point(n, e, lambda));
        }
      }
    }
  }
  // Regression values, confirmed against the subset-enumeration oracle.
  o.expect(oracle::max_size(3, 1, 0) == 2 && max_code_size({3, 1, 0}, SearchMethod::exhaustive).size == 2,
           "A(3,1,L=1) != 2");
  o.expect(oracle::max_size(2, 1, 0) == 1 && max_code_size({2, 1, 0}, SearchMethod::exhaustive).size == 1,
           "A(2,1,L=1) != 1");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.expect(seconds < 60.0, "runtime " + std::to_string(seconds) + " s exceeds 60 s");
  std::ostringstream d;
  d << "n<=4 grid in " << seconds << " s; A(3,1,1)=2, A(2,1,1)=1";
  o.detail = d.str();
  return o;
}

Outcome counting_identities() {
  Outcome o;
  std::mt19937_64 rng(606);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int e = static_cast<int>(rng() % (n + 1));
    std::vector<Word> ws;
    for (const auto& w : all_words(n)) {
      if (rng() & 1U) ws.push_back(w);
    }
    const Code c = Code::from_sorted(n, ws);
    std::uint64_t total = 0;
    for (const auto& y : all_words(n)) {
      for (const auto& x : c.members()) total += distance(x, y) <= e;
    }
    o.expect(total == c.size() * ball_volume(n, e), "double counting fails for code " + std::to_string(i));
  }
  for (int n = 0; n <= 4; ++n) {
    for (int e = 0; e <= n; ++e) {
      for (int lambda = 0; lambda <= 3; ++lambda) {
        o.expect(max_code_size({n, e, lambda}, SearchMethod::exhaustive).size <= counting_bound({n, e, lambda}),
                 "A > counting bound at " + point(n, e, lambda));
      }
    }
  }
  o.detail = "100 seeded codes, exact grid n<=4";
  return o;
}

Outcome complexity_ground_truths() {
  Outcome o;
  const auto& sys = lab();
  std::size_t witnesses = 0;
  for (int n = 1; n <= 6; ++n) {
    for (const auto& y : all_words(n)) {
      for (const auto& x : all_words(n)) {
        const int k = *sys.complexity_value(Level::zero, x, y);
        if (x == y) o.expect(k == 2, "K0(x|x) != 2 for x=" + x.str());
        o.expect(k <= n + 2, "K0(" + x.str() + "|" + y.str() + ") > n+2");
      }
    }
  }
  auto check_witness = [&](Level level, const Word& x, const Word& y) {
    const auto r = sys.complexity(level, x, y, kDefaultEnumerationCap);
    const auto out = sys.decode(level, *r.witness, y);
    o.expect(r.value && out && *out == x && static_cast<int>(r.witness->length()) == *r.value,
             "witness for " + x.str() + "|" + y.str() + " does not re-decode");
    ++witnesses;
    return *r.value;
  };
  for (int n = 0; n <= 4; ++n) {
    for (const auto& x : all_words(n)) {
      for (auto y : all_words(n)) {
        if (n == 0) break;
        const int k0 = check_witness(Level::zero, x, y);
        const int k1 = check_witness(Level::one, x, y);
        o.expect(k1 <= k0, "K1 > K0 at " + x.str() + "|" + y.str());
      }
      const int k0 = check_witness(Level::zero, x, Word());
      const int k1 = check_witness(Level::one, x, Word());
      o.expect(k1 <= k0, "K1 > K0 at " + x.str() + "|eps");
    }
  }
  o.detail = "n<=6 all pairs; " + std::to_string(witnesses) + " witnesses re-decoded";
  return o;
}

Outcome monotonicity_saturation() {
  Outcome o;
  for (auto level : {Level::zero, Level::one}) {
    for (int n = 1; n <= 6; ++n) {
      for (int e = 0; e <= n; ++e) {
        for (int lambda = 0; lambda <= n + 3; ++lambda) {
          const Code w = codeword_set(lab(), level, n, e, lambda);
          const Code up = codeword_set(lab(), level, n, e, lambda + 1);
          for (const auto& x : w.members()) o.expect(up.contains(x), "W not monotone in lambda at " + point(n, e, lambda));
          if (e < n) {
            const Code wider = codeword_set(lab(), level, n, e + 1, lambda);
            for (const auto& x : wider.members()) o.expect(w.contains(x), "W not antitone in e at " + point(n, e, lambda));
          }
          if (lambda >= n + 2) o.expect(w.size() == (std::size_t{1} << n), "W != B^n at " + point(n, e, lambda));
        }
      }
    }
  }
  // Regression value, confirmed by enumerating all programs of length <= 3.
  const auto& sys = lab();
  bool oracle_empty = true;
  for (const auto& x : all_words(2)) {
    bool codeword = true;
    for (const auto& y : ball_iter(BallSpec(x, 1))) {
      const auto first = oracle::enumerate_programs(sys, Level::zero, y, 3);
      codeword = codeword && first.contains(x.str());
    }
    oracle_empty = oracle_empty && !codeword;
  }
  o.expect(oracle_empty && codeword_set(sys, Level::zero, 2, 1, 3).empty(), "W0(2,1,3) is not empty");
  o.detail = "n<=6, both levels; W0(2,1,3) = {}";
  return o;
}

Outcome determinism() {
  Outcome o;
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return std::pair{code, out.str()};
  };
  const std::vector<std::string> base{"check", "all", "-n", "2..6", "-e", "0..2", "--lambda", "0..8", "--format", "json"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const auto one = run(with({"--workers", "1"}));
  const auto eight = run(with({"--workers", "8"}));
  o.expect(one.first == 0 && eight.first == 0, "check all did not exit 0");
  o.expect(one.second == eight.second, "workers 1 vs 8 differ");

  TempDir dir;
  const auto cold = run(with({"--workers", "8", "--cache-dir", dir.path().string()}));
  const auto warm = run(with({"--workers", "1", "--cache-dir", dir.path().string()}));
  std::filesystem::remove_all(dir.path());
  const auto deleted = run(with({"--workers", "8", "--cache-dir", dir.path().string()}));
  o.expect(cold.second == one.second && warm.second == one.second && deleted.second == one.second,
           "cache state changed the output");
  o.detail = std::to_string(one.second.size()) + " report bytes identical across workers and cache states";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1 prop1 list-size bound on codeword sets", prop1_suite},
      {"AC2 prop2 SET description bound with witnesses", prop2_suite},
      {"AC3 prop3 complexity sandwich on greedy codes", prop3_sandwich},
      {"AC4 prop4 ENUM description bound with witnesses", prop4_suite},
      {"AC5 exact search oracle equivalence", oracle_equivalence},
      {"AC6 counting identities", counting_identities},
      {"AC7 complexity ground truths", complexity_ground_truths},
      {"AC8 monotonicity and saturation", monotonicity_saturation},
      {"AC9 end-to-end determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + ex.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << o.detail << " (" << seconds << " s)\n";
    for (const auto& f : o.failures) std::cout << "       " << f << '\n';
    failed += !o.pass;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
