#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cwlab {

/// Hard ceiling on word length; configured N_MAX values must not exceed it.
inline constexpr int kWordCeiling = 20;
inline constexpr int kDefaultNMax = 14;

/// An element of B^n. Bit 0 is the leftmost (most significant) character of
/// the textual form, so lexicographic order on equal-length words coincides
/// with numeric order of `value()`.
class Word {
 public:
  Word() = default;
  Word(int length, std::uint32_t value);

  static Word parse(std::string_view text);
  static Word zeros(int length) { return Word(length, 0); }

  int length() const { return length_; }
  std::uint32_t value() const { return value_; }
  bool empty() const { return length_ == 0; }
  /// Bit at textual position i (0 = leftmost).
  int bit(int i) const { return static_cast<int>((value_ >> (length_ - 1 - i)) & 1U); }

  std::string str() const;

  Word operator^(const Word& other) const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Orders by length, then lexicographically.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return a.value_ <=> b.value_;
  }

 private:
  int length_ = 0;
  std::uint32_t value_ = 0;
};

struct BallSpec {
  Word center;
  int radius = 0;

  BallSpec(Word c, int e);
};

std::uint64_t binomial(int n, int k);

int distance(const Word& a, const Word& b);

/// Vol(n,e) = sum_{i<=e} C(n,i).
std::uint64_t ball_volume(int n, int e);

/// Canonical ordering of B^n around y: ascending distance from y, then
/// ascending lexicographic order.
Word word_at_rank(const Word& y, std::uint64_t rank);
std::uint64_t rank_of(const Word& y, const Word& x);

/// Words of Ball(center, radius) in word_at_rank order.
std::vector<Word> ball_iter(const BallSpec& spec);

/// XOR masks of weight <= e over n bits; Ball(y,e) = { y ^ m }.
std::vector<std::uint32_t> ball_masks(int n, int e);

/// All of B^n in lex order.
std::vector<Word> all_words(int n);

}  // namespace cwlab
