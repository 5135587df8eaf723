#include "cwlab/codewords.hpp"

#include <bit>
#include <limits>
#include <sstream>

#include "cwlab/errors.hpp"

namespace cwlab {
namespace {

void check_params(const DescriptionSystem& sys, int n, int e, int lambda) {
  sys.check_length(n);
  if (e < 0 || e > n) throw ParameterError("radius e must satisfy 0 <= e <= n");
  if (lambda < 0) throw ParameterError("lambda must be non-negative");
}

int floor_log2(std::size_t v) { return v == 0 ? 0 : std::bit_width(v) - 1; }

CheckReport base_report(const DescriptionSystem& sys, Proposition p, int n, int e, int lambda, Level level) {
  CheckReport r;
  r.proposition = p;
  r.n = n;
  r.e = e;
  r.lambda = lambda;
  r.level = level;
  r.version_tag = sys.config().version_tag;
  return r;
}

// Ball(x,e) around possibly empty x; the empty word's ball is {ε}.
std::vector<Word> ball_of(const Word& x, int e) {
  if (x.empty()) return {x};
  return ball_iter(BallSpec(x, e));
}

bool witness_checks(const DescriptionSystem& sys, Level level, const Program& p, const Word& y, const Word& x,
                    long long bound) {
  auto out = sys.decode(level, p, y);
  return out && *out == x && static_cast<long long>(p.length()) <= bound;
}

}  // namespace

std::string to_string(Proposition p) {
  switch (p) {
    case Proposition::p1: return "P1";
    case Proposition::p2: return "P2";
    case Proposition::p3: return "P3";
    case Proposition::p4: return "P4";
  }
  return "?";
}

CodewordCertificate is_codeword(const DescriptionSystem& sys, Level level, const Word& x, int e, int lambda) {
  check_params(sys, x.length(), e, lambda);
  CodewordCertificate cert{x, e, lambda, level, false, x, -1};
  for (const auto& y : ball_of(x, e)) {
    const int k = *sys.complexity_value(level, x, y);
    if (k > cert.worst_k) {
      cert.worst_k = k;
      cert.worst_y = y;
    }
  }
  cert.verdict = cert.worst_k <= lambda;
  return cert;
}

Code codeword_set(const DescriptionSystem& sys, Level level, int n, int e, int lambda) {
  check_params(sys, n, e, lambda);
  if (level == Level::zero) return sys.level0_codeword_set(n, e, static_cast<std::uint64_t>(lambda));
  const auto worst = sys.ball_max(level, n, e);
  std::vector<Word> members;
  for (std::size_t x = 0; x < worst.size(); ++x) {
    if (worst[x] <= lambda) members.emplace_back(n, static_cast<std::uint32_t>(x));
  }
  return Code::from_sorted(n, std::move(members));
}

ComplexCodeword max_complexity_codeword(const DescriptionSystem& sys, int n, int e, int lambda) {
  check_params(sys, n, e, lambda);
  const Code& words = sys.level0_codeword_set(n, e, static_cast<std::uint64_t>(lambda));
  if (words.empty()) {
    throw EmptySetError("W_0(" + std::to_string(n) + "," + std::to_string(e) + "," + std::to_string(lambda) +
                        ") is empty");
  }
  ComplexCodeword best{words.members().front(), -1};
  for (const auto& x : words.members()) {
    const int k = *sys.complexity_value(Level::zero, x, Word());
    if (k > best.k) best = {x, k};
  }
  return best;
}

CheckReport check_prop1(const DescriptionSystem& sys, Level level, int n, int e, int lambda) {
  check_params(sys, n, e, lambda);
  auto r = base_report(sys, Proposition::p1, n, e, lambda, level);
  const Code words = codeword_set(sys, level, n, e, lambda);
  r.explicit_bound = (lambda >= 62) ? std::numeric_limits<long long>::max() : (1LL << (lambda + 1)) - 1;
  r.bound_formula = "2^(lambda+1) - 1 = 2^" + std::to_string(lambda + 1) + " - 1";
  r.observed = static_cast<long long>(list_profile(words, e));
  r.vacuous = words.empty();
  r.pass = r.observed <= r.explicit_bound;
  return r;
}

CheckReport check_prop2(const DescriptionSystem& sys, const Code& code, int e, int lambda) {
  check_params(sys, code.n(), e, lambda);
  if (code.empty() || code.n() == 0) throw ParameterError("check_prop2 requires a nonempty code of positive length");
  if (!is_list_decodable(code, e, lambda)) throw ParameterError("check_prop2 requires an (e, 2^lambda)-list-decodable code");

  const int n = code.n();
  auto r = base_report(sys, Proposition::p2, n, e, lambda, Level::zero);
  const std::string encoded = set_encode(code);
  r.code_size = code.size();
  r.explicit_bound = 3 + gnat_length(static_cast<std::uint64_t>(e)) + static_cast<long long>(encoded.size()) + lambda;
  r.bound_formula = "3 + |gnat(e)| + |set_encode(C)| + lambda = 3 + " + std::to_string(gnat_length(e)) + " + " +
                    std::to_string(encoded.size()) + " + " + std::to_string(lambda);

  long long worst = -1;
  std::pair<Word, Word> pair;
  for (const auto& x : code.members()) {
    for (const auto& y : ball_iter(BallSpec(x, e))) {
      const int k = *sys.complexity_value(Level::zero, x, y);
      if (k > worst) {
        worst = k;
        pair = {x, y};
      }
    }
  }
  r.observed = worst;
  r.worst_pair = pair;

  // SET description of the worst pair: radius, the code, and the ordinal of x
  // in the near-list of y.
  const auto& [x, y] = pair;
  std::uint64_t before = 0;
  std::uint64_t s = 0;
  for (const auto& w : code.members()) {
    if (distance(w, y) > e) continue;
    if (w < x) ++before;
    ++s;
  }
  r.witness_program = Program(std::string(tag::set) + gnat_encode(static_cast<std::uint64_t>(e)) + encoded +
                              fixed_index(before, s));
  r.witness_valid = witness_checks(sys, Level::zero, *r.witness_program, y, x, r.explicit_bound);
  r.pass = r.observed <= r.explicit_bound;
  return r;
}

CheckReport check_prop3(const DescriptionSystem& sys, int n, int e, int lambda) {
  check_params(sys, n, e, lambda);
  auto r = base_report(sys, Proposition::p3, n, e, lambda, Level::zero);
  const Code& code = sys.greedy_code(n, e, static_cast<std::uint64_t>(lambda));
  const int c = 4 + gnat_length(static_cast<std::uint64_t>(e)) + gnat_length(static_cast<std::uint64_t>(lambda));
  r.code_size = code.size();
  r.explicit_bound = lambda + c;
  r.bound_formula = "lambda + 4 + |gnat(e)| + |gnat(lambda)| = " + std::to_string(lambda) + " + 4 + " +
                    std::to_string(gnat_length(e)) + " + " + std::to_string(gnat_length(lambda));

  long long worst = -1;
  std::pair<Word, Word> pair;
  int max_unconditional = -1;
  for (const auto& x : code.members()) {
    for (const auto& y : ball_of(x, e)) {
      const int k = *sys.complexity_value(Level::zero, x, y);
      if (k > worst) {
        worst = k;
        pair = {x, y};
      }
    }
    max_unconditional = std::max(max_unconditional, *sys.complexity_value(Level::zero, x, Word()));
  }
  r.observed = worst;
  r.worst_pair = pair;
  r.lower_bound = floor_log2(code.size());
  r.lower_observed = max_unconditional;

  // SEARCH description of the worst pair; the empty word has no conditional form.
  if (n > 0) {
    const auto& [x, y] = pair;
    std::uint64_t before = 0;
    std::uint64_t s = 0;
    for (const auto& w : code.members()) {
      if (distance(w, y) > e) continue;
      if (w < x) ++before;
      ++s;
    }
    r.witness_program = Program(std::string(tag::search) + gnat_encode(static_cast<std::uint64_t>(e)) +
                                gnat_encode(static_cast<std::uint64_t>(lambda)) + fixed_index(before, s));
    r.witness_valid = witness_checks(sys, Level::zero, *r.witness_program, y, x, r.explicit_bound);
  }
  r.pass = r.observed <= r.explicit_bound && *r.lower_observed >= *r.lower_bound;
  return r;
}

CheckReport check_prop4(const DescriptionSystem& sys, int n, int e, int lambda) {
  check_params(sys, n, e, lambda);
  auto r = base_report(sys, Proposition::p4, n, e, lambda, Level::one);
  r.note = "stratified: membership via K0, complexity via K1";
  const Code& words = sys.level0_codeword_set(n, e, static_cast<std::uint64_t>(lambda));
  r.enumeration_size = words.size();
  const int header = 4 + gnat_length(static_cast<std::uint64_t>(n)) + gnat_length(static_cast<std::uint64_t>(e)) +
                     gnat_length(static_cast<std::uint64_t>(lambda));
  if (words.empty()) {
    r.vacuous = true;
    r.pass = true;
    r.explicit_bound = header;
    r.bound_formula = "vacuous: W0 is empty";
    r.observed = 0;
    return r;
  }
  const int width = index_width(words.size());
  r.explicit_bound = header + width;
  r.bound_formula = "4 + |gnat(n)| + |gnat(e)| + |gnat(lambda)| + ceil(log2 N) = 4 + " +
                    std::to_string(gnat_length(n)) + " + " + std::to_string(gnat_length(e)) + " + " +
                    std::to_string(gnat_length(lambda)) + " + " + std::to_string(width);

  long long worst = -1;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const int k = *sys.complexity_value(Level::one, words.members()[i], Word());
    if (k > worst) {
      worst = k;
      worst_index = i;
    }
  }
  const Word& x = words.members()[worst_index];
  r.observed = worst;
  r.worst_pair = std::pair{x, Word()};
  r.witness_program = Program(std::string(tag::enumerate) + gnat_encode(static_cast<std::uint64_t>(n)) +
                              gnat_encode(static_cast<std::uint64_t>(e)) +
                              gnat_encode(static_cast<std::uint64_t>(lambda)) + fixed_index(worst_index, words.size()));
  r.witness_valid = witness_checks(sys, Level::one, *r.witness_program, Word(), x, r.explicit_bound);
  r.pass = r.observed <= r.explicit_bound;
  return r;
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["proposition"] = to_string(proposition);
  j["params"] = {{"n", n}, {"e", e}, {"lambda", lambda}};
  j["level"] = static_cast<int>(level);
  j["explicit_bound"] = explicit_bound;
  j["bound_formula"] = bound_formula;
  j["observed"] = observed;
  j["pass"] = pass;
  j["vacuous"] = vacuous;
  if (witness_program) j["witness_program"] = witness_program->bits();
  if (witness_valid) j["witness_valid"] = *witness_valid;
  if (worst_pair) j["worst_pair"] = {{"x", worst_pair->first.str()}, {"y", worst_pair->second.str()}};
  if (code_size) j["code_size"] = *code_size;
  if (lower_bound) j["lower_bound"] = *lower_bound;
  if (lower_observed) j["lower_observed"] = *lower_observed;
  if (enumeration_size) j["enumeration_size"] = *enumeration_size;
  if (!note.empty()) j["note"] = note;
  j["version_tag"] = version_tag;
  return j;
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << to_string(proposition) << " n=" << n << " e=" << e << " lambda=" << lambda << " level=" << static_cast<int>(level)
     << " observed=" << observed << " bound=" << explicit_bound;
  if (lower_bound) os << " lower=" << *lower_bound << " lower_observed=" << *lower_observed;
  os << (pass ? (vacuous ? " PASS(vacuous)" : " PASS") : " FAIL");
  if (witness_program) os << " witness=" << witness_program->bits();
  return os.str();
}

}  // namespace cwlab
