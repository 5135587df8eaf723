#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cwlab/hamming.hpp"

namespace cwlab {

/// A subset of B^n, kept strictly lex-ascending.
class Code {
 public:
  explicit Code(int n = 0);

  /// Members must already be strictly ascending and of length n.
  static Code from_sorted(int n, std::vector<Word> members);
  /// Sorts; duplicates are a parameter error.
  static Code from_words(int n, std::vector<Word> words);

  int n() const { return n_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Word>& members() const { return members_; }
  bool contains(const Word& w) const;
  /// Position of w in the member list, or -1.
  std::int64_t index_of(const Word& w) const;

  friend bool operator==(const Code&, const Code&) = default;
  friend auto operator<=>(const Code& a, const Code& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.members_ <=> b.members_;
  }

 private:
  int n_;
  std::vector<Word> members_;
};

/// n, radius e and lambda = log2 L.
struct CodeParams {
  int n = 0;
  int e = 0;
  int lambda = 0;

  CodeParams(int n_, int e_, int lambda_);
  /// L = 2^lambda, saturated so that it never overflows.
  std::uint64_t list_size() const;
};

enum class SearchMethod { exhaustive, branch_and_bound };

struct MaxCodeResult {
  std::size_t size = 0;
  Code witness;
};

/// Largest word length accepted by the exhaustive subset search.
inline constexpr int kExhaustiveMaxN = 4;

/// max_y |C ∩ Ball(y,e)|.
std::uint64_t list_profile(const Code& code, int e);
bool is_list_decodable(const Code& code, int e, int lambda);

/// Lex scan of B^n keeping every word that preserves (e, 2^lambda)
/// list-decodability.
Code greedy_lex_code(const CodeParams& params);

MaxCodeResult max_code_size(const CodeParams& params, SearchMethod method);

/// floor(2^lambda * 2^n / Vol(n,e)), saturating at UINT64_MAX.
std::uint64_t counting_bound(const CodeParams& params);

Code translate(const Code& code, const Word& shift);

/// Seeded random (e, 2^lambda)-list-decodable code: B^n is shuffled and each
/// word is kept with probability 1/2 when the constraint allows it.
Code random_list_decodable_code(const CodeParams& params, std::uint64_t seed);

/// Smallest lambda for which every code in B^n is (e, 2^lambda)-list-decodable.
int saturation_lambda(int n, int e);

// Code file format: `n=<decimal>` header, one word per line in strictly
// ascending order, `#` comment lines.
std::string format_code(const Code& code);
Code parse_code(std::string_view text);

}  // namespace cwlab
