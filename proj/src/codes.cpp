#include "cwlab/codes.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <random>
#include <sstream>

#include "cwlab/errors.hpp"

namespace cwlab {
namespace {

void check_radius(int n, int e) {
  if (e < 0 || e > n) throw ParameterError("radius e must satisfy 0 <= e <= n");
}

// Per-center occupancy |C ∩ Ball(y,e)| over all y in B^n, updated on
// insertion and removal through the radius-e masks.
class BallCounter {
 public:
  BallCounter(int n, int e, std::uint64_t limit)
      : masks_(ball_masks(n, e)), counts_(std::size_t{1} << n, 0), limit_(limit) {}

  bool can_add(std::uint32_t x) const {
    return std::ranges::all_of(masks_, [&](std::uint32_t m) { return counts_[x ^ m] < limit_; });
  }
  void add(std::uint32_t x) {
    for (auto m : masks_) ++counts_[x ^ m];
  }
  void remove(std::uint32_t x) {
    for (auto m : masks_) --counts_[x ^ m];
  }
  std::uint64_t max_count() const {
    return counts_.empty() ? 0 : *std::ranges::max_element(counts_);
  }
  const std::vector<std::uint32_t>& masks() const { return masks_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::vector<std::uint32_t> masks_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t limit_;
};

Code code_from_values(int n, const std::vector<std::uint32_t>& values) {
  std::vector<Word> words;
  words.reserve(values.size());
  for (auto v : values) words.emplace_back(n, v);
  return Code::from_sorted(n, std::move(words));
}

MaxCodeResult exhaustive_search(const CodeParams& p) {
  if (p.n > kExhaustiveMaxN) {
    throw ResourceError("exhaustive subset search is limited to n <= " + std::to_string(kExhaustiveMaxN));
  }
  const std::uint32_t cube = std::uint32_t{1} << p.n;
  const std::uint64_t subsets = std::uint64_t{1} << cube;
  const auto masks = ball_masks(p.n, p.e);
  const std::uint64_t limit = p.list_size();

  std::size_t best_size = 0;
  std::vector<std::uint32_t> best;
  std::vector<std::uint64_t> counts(cube);
  std::vector<std::uint32_t> members;
  for (std::uint64_t s = 0; s < subsets; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size < best_size) continue;
    members.clear();
    for (std::uint32_t x = 0; x < cube; ++x) {
      if ((s >> x) & 1U) members.push_back(x);
    }
    if (size == best_size && !best.empty() && !(members < best)) continue;
    std::ranges::fill(counts, 0);
    bool ok = true;
    for (auto x : members) {
      for (auto m : masks) {
        if (++counts[x ^ m] > limit) ok = false;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    best_size = size;
    best = members;
  }
  return {best_size, code_from_values(p.n, best)};
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const CodeParams& p)
      : n_(p.n),
        cube_(std::uint32_t{1} << p.n),
        volume_(ball_volume(p.n, p.e)),
        counter_(p.n, p.e, p.list_size()),
        remaining_in_ball_(cube_, volume_) {}

  MaxCodeResult run() {
    search(0);
    return {best_.size(), code_from_values(n_, best_)};
  }

 private:
  // Upper bound on how many of the words >= i can still be added: each added
  // word consumes one unit of capacity at each of the Vol(n,e) centers of its
  // ball, and a center can absorb at most min(free capacity, words of the
  // suffix inside its ball).
  std::uint64_t suffix_bound(std::uint32_t i) const {
    const auto& counts = counter_.counts();
    std::uint64_t capacity = 0;
    for (std::uint32_t y = 0; y < cube_; ++y) {
      capacity += std::min(counter_.limit() - counts[y], remaining_in_ball_[y]);
    }
    return std::min<std::uint64_t>(capacity / volume_, cube_ - i);
  }

  void consume(std::uint32_t x, int delta) {
    for (auto m : counter_.masks()) remaining_in_ball_[x ^ m] += static_cast<std::uint64_t>(delta);
  }

  void search(std::uint32_t i) {
    if (current_.size() > best_.size()) best_ = current_;
    if (i == cube_) return;
    if (current_.size() + suffix_bound(i) <= best_.size()) return;

    consume(i, -1);
    if (counter_.can_add(i)) {
      counter_.add(i);
      current_.push_back(i);
      search(i + 1);
      current_.pop_back();
      counter_.remove(i);
    }
    search(i + 1);
    consume(i, +1);
  }

  int n_;
  std::uint32_t cube_;
  std::uint64_t volume_;
  BallCounter counter_;
  std::vector<std::uint64_t> remaining_in_ball_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_;
};

}  // namespace

Code::Code(int n) : n_(n) {
  if (n < 0 || n > kWordCeiling) throw ParameterError("code word length out of range");
}

Code Code::from_sorted(int n, std::vector<Word> members) {
  Code c(n);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].length() != n) throw ParameterError("code member has wrong length");
    if (i > 0 && !(members[i - 1] < members[i])) {
      throw ParameterError("code members must be strictly ascending");
    }
  }
  c.members_ = std::move(members);
  return c;
}

Code Code::from_words(int n, std::vector<Word> words) {
  std::ranges::sort(words);
  return from_sorted(n, std::move(words));
}

bool Code::contains(const Word& w) const { return std::ranges::binary_search(members_, w); }

std::int64_t Code::index_of(const Word& w) const {
  auto it = std::ranges::lower_bound(members_, w);
  if (it == members_.end() || *it != w) return -1;
  return it - members_.begin();
}

CodeParams::CodeParams(int n_, int e_, int lambda_) : n(n_), e(e_), lambda(lambda_) {
  if (n < 0 || n > kWordCeiling) throw ParameterError("n out of range");
  check_radius(n, e);
  if (lambda < 0) throw ParameterError("lambda must be non-negative");
}

std::uint64_t CodeParams::list_size() const {
  return lambda >= 63 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << lambda;
}

std::uint64_t list_profile(const Code& code, int e) {
  check_radius(code.n(), e);
  if (code.empty()) return 0;
  BallCounter counter(code.n(), e, std::numeric_limits<std::uint64_t>::max());
  for (const auto& w : code.members()) counter.add(w.value());
  return counter.max_count();
}

bool is_list_decodable(const Code& code, int e, int lambda) {
  return list_profile(code, e) <= CodeParams(code.n(), e, lambda).list_size();
}

Code greedy_lex_code(const CodeParams& p) {
  BallCounter counter(p.n, p.e, p.list_size());
  std::vector<std::uint32_t> kept;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << p.n); ++x) {
    if (counter.can_add(x)) {
      counter.add(x);
      kept.push_back(x);
    }
  }
  return code_from_values(p.n, kept);
}

MaxCodeResult max_code_size(const CodeParams& params, SearchMethod method) {
  switch (method) {
    case SearchMethod::exhaustive:
      return exhaustive_search(params);
    case SearchMethod::branch_and_bound:
      return BranchAndBound(params).run();
  }
  throw ParameterError("unknown search method");
}

std::uint64_t counting_bound(const CodeParams& p) {
  if (p.lambda + p.n >= 64) return std::numeric_limits<std::uint64_t>::max();
  const unsigned __int128 total = static_cast<unsigned __int128>(1) << (p.lambda + p.n);
  const auto q = total / ball_volume(p.n, p.e);
  if (q > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(q);
}

Code translate(const Code& code, const Word& shift) {
  if (shift.length() != code.n()) throw ParameterError("translation length mismatch");
  std::vector<Word> out;
  out.reserve(code.size());
  for (const auto& w : code.members()) out.push_back(w ^ shift);
  return Code::from_words(code.n(), std::move(out));
}

Code random_list_decodable_code(const CodeParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> order(std::size_t{1} << p.n);
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  // Explicit Fisher-Yates so the sequence does not depend on the standard library.
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  BallCounter counter(p.n, p.e, p.list_size());
  std::vector<std::uint32_t> kept;
  for (auto x : order) {
    if ((rng() & 1U) && counter.can_add(x)) {
      counter.add(x);
      kept.push_back(x);
    }
  }
  std::ranges::sort(kept);
  return code_from_values(p.n, kept);
}

int saturation_lambda(int n, int e) {
  const std::uint64_t vol = ball_volume(n, e);
  int lambda = 0;
  while ((std::uint64_t{1} << lambda) < vol) ++lambda;
  return lambda;
}

std::string format_code(const Code& code) {
  std::string out = "n=" + std::to_string(code.n()) + "\n";
  for (const auto& w : code.members()) {
    out += w.str();
    out += '\n';
  }
  return out;
}

Code parse_code(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
      lines.push_back(text);
      break;
    }
    lines.push_back(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }

  std::size_t i = 0;
  auto skip_comments = [&] {
    while (i < lines.size() && lines[i].starts_with('#')) ++i;
  };
  skip_comments();
  if (i == lines.size() || !lines[i].starts_with("n=")) throw ParameterError("code file must start with n=<decimal>");
  auto digits = lines[i].substr(2);
  int n = -1;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw ParameterError("malformed code header: " + std::string(lines[i]));
  }
  if (n < 0 || n > kWordCeiling) throw ParameterError("code word length out of range");
  ++i;

  std::vector<Word> words;
  for (; i < lines.size(); ++i) {
    if (lines[i].starts_with('#')) continue;
    auto w = Word::parse(lines[i]);
    if (w.length() != n) throw ParameterError("code line " + std::to_string(i + 1) + " has wrong length");
    if (!words.empty() && !(words.back() < w)) {
      throw ParameterError("code line " + std::to_string(i + 1) + " is unsorted or duplicate");
    }
    words.push_back(w);
  }
  return Code::from_sorted(n, std::move(words));
}

}  // namespace cwlab
