#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cwlab/codes.hpp"
#include "cwlab/hamming.hpp"

namespace cwlab {

inline constexpr std::string_view kVersionTag = "rds-v1";
inline constexpr int kDefaultEnumerationCap = 24;
/// Above this length the all-pairs conditional table is not materialized and
/// conditional complexities are computed one query at a time.
inline constexpr int kTableMaxN = 10;

enum class Level : int { zero = 0, one = 1 };

/// A candidate description: a finite '0'/'1' string.
class Program {
 public:
  Program() = default;
  explicit Program(std::string bits);

  const std::string& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }

  friend bool operator==(const Program&, const Program&) = default;
  /// Length first, then lexicographic: the enumeration order.
  friend std::strong_ordering operator<=>(const Program& a, const Program& b) {
    if (auto c = a.bits_.size() <=> b.bits_.size(); c != 0) return c;
    return a.bits_.compare(b.bits_) <=> 0;
  }

 private:
  std::string bits_;
};

// Mode tags of the rds-v1 grammar.
namespace tag {
inline constexpr std::string_view rank = "1";
inline constexpr std::string_view lit = "01";
inline constexpr std::string_view set = "001";
inline constexpr std::string_view search = "0001";
inline constexpr std::string_view enumerate = "0000";
}  // namespace tag

/// Elias-gamma code of m+1.
std::string gnat_encode(std::uint64_t m);
int gnat_length(std::uint64_t m);

struct GnatValue {
  std::uint64_t value;
  std::size_t consumed;
};
/// nullopt when the stream ends before the terminating '1', or when the value
/// does not fit in 64 bits.
std::optional<GnatValue> gnat_decode(std::string_view bits);

/// ceil(log2 s), 0 for s <= 1.
int index_width(std::uint64_t s);
/// `index` as exactly index_width(s) bits, MSB first.
std::string fixed_index(std::uint64_t index, std::uint64_t s);

std::string set_encode(const Code& code);

struct SystemConfig {
  int n_max = kDefaultNMax;
  int enumeration_cap = kDefaultEnumerationCap;
  std::string version_tag{kVersionTag};
  /// Threads used to build complexity tables.
  int workers = 1;
  /// Re-decode every witness returned by complexity().
  bool verify_witnesses = false;
};

struct ComplexityResult {
  std::optional<int> value;
  std::optional<Program> witness;
  Level level = Level::zero;
  Word x;
  Word y;
};

/// Snapshot of memoized sub-results, for persistence across runs.
struct MemoSnapshot {
  std::map<std::tuple<int, int, int>, Code> greedy_codes;           // (n, e, lambda)
  std::map<int, std::vector<std::uint8_t>> conditional_tables;     // n
  std::map<std::pair<int, int>, std::vector<std::uint8_t>> unconditional_tables;  // (level, n)
  std::map<std::tuple<int, int, int>, Code> codeword_sets;          // level-0 (n, e, lambda)
};

/// The rds-v1 description system: a total decoder over programs together with
/// exact conditional complexity K_level(x|y). Memoized sub-results (greedy
/// codes, complexity tables, level-0 codeword sets) are computed once and are
/// safe to share between threads.
class DescriptionSystem {
 public:
  explicit DescriptionSystem(SystemConfig config = {});
  ~DescriptionSystem();
  DescriptionSystem(const DescriptionSystem&) = delete;
  DescriptionSystem& operator=(const DescriptionSystem&) = delete;

  const SystemConfig& config() const { return config_; }

  /// nullopt is INVALID. Never throws for programs; throws ParameterError only
  /// when |y| > N_MAX.
  std::optional<Word> decode(Level level, const Program& program, const Word& y) const;

  /// Shortest program (lex-least among the shortest) producing x from y, with
  /// no length cap; nullopt only when y is nonempty and |x| != |y|.
  std::optional<Program> shortest_program(Level level, const Word& x, const Word& y) const;

  /// K_level(x|y) without a length cap; nullopt iff lengths are incompatible.
  std::optional<int> complexity_value(Level level, const Word& x, const Word& y) const;

  ComplexityResult complexity(Level level, const Word& x, const Word& y, int max_length) const;
  bool complexity_le(Level level, const Word& x, const Word& y, int bound) const;

  const Code& greedy_code(int n, int e, std::uint64_t lambda) const;

  /// K(x|y) for y, x in B^n (n >= 1), indexed [y << n | x]. Identical at both
  /// levels because ENUM requires the empty condition.
  const std::vector<std::uint8_t>& conditional_table(int n) const;
  /// K_level(x|ε) for x in B^n.
  const std::vector<std::uint8_t>& unconditional_table(Level level, int n) const;

  /// max over y in Ball(x,e) of K_level(x|y), for every x in B^n.
  std::vector<int> ball_max(Level level, int n, int e) const;

  /// W_0(n, e, lambda): level-0 codewords, lex order.
  const Code& level0_codeword_set(int n, int e, std::uint64_t lambda) const;

  MemoSnapshot snapshot() const;
  /// Throws IntegrityError if an entry is already present with another value.
  void preload(const MemoSnapshot& snapshot);

  void check_length(int n) const;

 private:
  struct Memo;

  std::optional<Word> decode_impl(Level level, std::string_view bits, const Word& y) const;
  std::vector<std::uint8_t> build_conditional_table(int n) const;
  std::vector<std::uint8_t> build_unconditional_table(Level level, int n) const;

  SystemConfig config_;
  std::unique_ptr<Memo> memo_;
};

}  // namespace cwlab
