#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "cwlab/codes.hpp"
#include "cwlab/descsys.hpp"

namespace cwlab {

/// Outcome of the codeword test for one x: the worst condition in its ball.
struct CodewordCertificate {
  Word x;
  int e = 0;
  int lambda = 0;
  Level level = Level::zero;
  bool verdict = false;
  Word worst_y;
  int worst_k = 0;
};

/// Verdict is true iff K_level(x|y) <= lambda for every y in Ball(x,e).
/// The worst y is the first maximizer in ball order.
CodewordCertificate is_codeword(const DescriptionSystem& sys, Level level, const Word& x, int e, int lambda);

/// W_level(n, e, lambda) in lex order.
Code codeword_set(const DescriptionSystem& sys, Level level, int n, int e, int lambda);

struct ComplexCodeword {
  Word x;
  int k = 0;
};

/// Element of W_0(n,e,lambda) maximizing K_0(x|ε), lex-least on ties.
/// Throws EmptySetError when W_0 is empty.
ComplexCodeword max_complexity_codeword(const DescriptionSystem& sys, int n, int e, int lambda);

enum class Proposition { p1, p2, p3, p4 };
std::string to_string(Proposition p);

struct CheckReport {
  Proposition proposition = Proposition::p1;
  int n = 0;
  int e = 0;
  int lambda = 0;
  Level level = Level::zero;
  long long explicit_bound = 0;
  std::string bound_formula;
  long long observed = 0;
  bool pass = false;
  bool vacuous = false;
  std::optional<Program> witness_program;
  /// Whether the emitted witness decodes to the worst-pair word within the bound.
  std::optional<bool> witness_valid;
  std::optional<std::pair<Word, Word>> worst_pair;
  std::string version_tag;

  // prop2: size of the checked code.
  std::optional<std::size_t> code_size;
  // prop3, lower side: floor(log2 |C*|) against max K_0(x|ε) over C*.
  std::optional<int> lower_bound;
  std::optional<int> lower_observed;
  // prop4: N = |W_0|.
  std::optional<std::size_t> enumeration_size;
  std::string note;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// The level-`level` codeword set is a list-decodable code with list size at
/// most the number of programs of length <= lambda, 2^(lambda+1) - 1.
CheckReport check_prop1(const DescriptionSystem& sys, Level level, int n, int e, int lambda);

/// Every member of an (e, 2^lambda)-list-decodable code C has level-0
/// complexity given any y in its ball at most 3 + |gnat(e)| + |set_encode(C)|
/// + lambda, witnessed by a SET program.
CheckReport check_prop2(const DescriptionSystem& sys, const Code& code, int e, int lambda);

/// Two-sided check on the greedy code C*: every member is an
/// (e, 2^(lambda+c))-codeword with c = 4 + |gnat(e)| + |gnat(lambda)|, and
/// some member has K_0(x|ε) >= floor(log2 |C*|).
CheckReport check_prop3(const DescriptionSystem& sys, int n, int e, int lambda);

/// Every x in W_0(n,e,lambda) has K_1(x|ε) <= 4 + |gnat(n)| + |gnat(e)| +
/// |gnat(lambda)| + ceil(log2 N), witnessed by an ENUM program.
CheckReport check_prop4(const DescriptionSystem& sys, int n, int e, int lambda);

}  // namespace cwlab
