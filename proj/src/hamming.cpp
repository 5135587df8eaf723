#include "cwlab/hamming.hpp"

#include <array>
#include <bit>

#include "cwlab/errors.hpp"

namespace cwlab {
namespace {

void check_length(int n) {
  if (n < 0 || n > kWordCeiling) {
    throw ParameterError("word length " + std::to_string(n) + " outside [0, " +
                         std::to_string(kWordCeiling) + "]");
  }
}

void check_same_nonempty(const Word& a, const Word& b) {
  if (a.length() != b.length()) throw ParameterError("word length mismatch");
  if (a.empty()) throw ParameterError("empty words have no Hamming geometry");
}

const auto& binomial_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kWordCeiling + 1>, kWordCeiling + 1> t{};
    for (int n = 0; n <= kWordCeiling; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

// Number of completions of the remaining `free` positions that reach exactly
// `need` more differences.
std::uint64_t completions(int free, int need) {
  if (need < 0 || need > free) return 0;
  return binomial_table()[free][need];
}

}  // namespace

Word::Word(int length, std::uint32_t value) : length_(length), value_(value) {
  check_length(length);
  if (length < 32 && (value >> length) != 0) throw ParameterError("word value exceeds its length");
}

Word Word::parse(std::string_view text) {
  check_length(static_cast<int>(text.size()));
  std::uint32_t v = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw ParameterError("word must consist of '0'/'1' characters");
    v = (v << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return Word(static_cast<int>(text.size()), v);
}

std::string Word::str() const {
  std::string s(static_cast<std::size_t>(length_), '0');
  for (int i = 0; i < length_; ++i) s[i] = static_cast<char>('0' + bit(i));
  return s;
}

Word Word::operator^(const Word& other) const {
  if (length_ != other.length_) throw ParameterError("word length mismatch");
  return Word(length_, value_ ^ other.value_);
}

BallSpec::BallSpec(Word c, int e) : center(c), radius(e) {
  if (center.empty()) throw ParameterError("ball center must be nonempty");
  if (e < 0 || e > center.length()) throw ParameterError("ball radius must lie in [0, n]");
}

std::uint64_t binomial(int n, int k) {
  check_length(n);
  if (k < 0 || k > n) return 0;
  return binomial_table()[n][k];
}

int distance(const Word& a, const Word& b) {
  check_same_nonempty(a, b);
  return std::popcount(a.value() ^ b.value());
}

std::uint64_t ball_volume(int n, int e) {
  check_length(n);
  if (e < 0 || e > n) throw ParameterError("ball_volume requires 0 <= e <= n");
  std::uint64_t v = 0;
  for (int i = 0; i <= e; ++i) v += binomial(n, i);
  return v;
}

Word word_at_rank(const Word& y, std::uint64_t rank) {
  if (y.empty()) throw ParameterError("word_at_rank requires a nonempty center");
  const int n = y.length();
  if (rank >= (std::uint64_t{1} << n)) throw ParameterError("rank out of range");

  int d = 0;
  while (rank >= binomial(n, d)) {
    rank -= binomial(n, d);
    ++d;
  }
  std::uint32_t value = 0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const int yi = y.bit(i);
    const std::uint64_t with_zero = completions(n - 1 - i, d - used - yi);
    int xi = 0;
    if (rank >= with_zero) {
      rank -= with_zero;
      xi = 1;
    }
    value = (value << 1) | static_cast<std::uint32_t>(xi);
    used += xi != yi;
  }
  return Word(n, value);
}

std::uint64_t rank_of(const Word& y, const Word& x) {
  check_same_nonempty(x, y);
  const int n = y.length();
  const int d = distance(x, y);
  std::uint64_t rank = 0;
  for (int i = 0; i < d; ++i) rank += binomial(n, i);
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const int yi = y.bit(i);
    const int xi = x.bit(i);
    if (xi == 1) rank += completions(n - 1 - i, d - used - yi);
    used += xi != yi;
  }
  return rank;
}

std::vector<Word> ball_iter(const BallSpec& spec) {
  const std::uint64_t vol = ball_volume(spec.center.length(), spec.radius);
  std::vector<Word> out;
  out.reserve(vol);
  for (std::uint64_t r = 0; r < vol; ++r) out.push_back(word_at_rank(spec.center, r));
  return out;
}

std::vector<std::uint32_t> ball_masks(int n, int e) {
  check_length(n);
  if (e < 0 || e > n) throw ParameterError("ball radius must lie in [0, n]");
  std::vector<std::uint32_t> masks;
  masks.reserve(ball_volume(n, e));
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    if (std::popcount(m) <= e) masks.push_back(m);
  }
  return masks;
}

std::vector<Word> all_words(int n) {
  check_length(n);
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << n); ++v) out.emplace_back(n, v);
  return out;
}

}  // namespace cwlab
