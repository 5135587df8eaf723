#include "cwlab/descsys.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <thread>

#include "cwlab/errors.hpp"

namespace cwlab {
namespace {

// Compute-once map: the first caller for a key computes the value, concurrent
// callers for the same key wait on the shared future.
template <typename Key, typename Value>
class MemoMap {
 public:
  using Future = std::shared_future<std::shared_ptr<const Value>>;

  template <typename Compute>
  const Value& get(const Key& key, Compute&& compute) {
    std::promise<std::shared_ptr<const Value>> promise;
    Future future;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) {
        future = it->second;
      } else {
        future = promise.get_future().share();
        entries_.emplace(key, future);
        owner = true;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const Value>(compute()));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return *future.get();
  }

  std::map<Key, Value> ready_entries() const {
    std::lock_guard lock(mutex_);
    std::map<Key, Value> out;
    for (const auto& [key, future] : entries_) {
      if (future.wait_for(std::chrono::seconds(0)) != std::future_status::ready) continue;
      try {
        out.emplace(key, *future.get());
      } catch (...) {
        // failed computations are not persisted
      }
    }
    return out;
  }

  /// Returns false if the key is present with a different value.
  bool preload(const Key& key, const Value& value) {
    Future existing;
    {
      std::lock_guard lock(mutex_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        std::promise<std::shared_ptr<const Value>> p;
        p.set_value(std::make_shared<const Value>(value));
        entries_.emplace(key, p.get_future().share());
        return true;
      }
      existing = it->second;
    }
    return *existing.get() == value;
  }

 private:
  mutable std::mutex mutex_;
  std::map<Key, Future> entries_;
};

class BitReader {
 public:
  explicit BitReader(std::string_view bits) : bits_(bits) {}

  bool take_tag(std::string_view tag) {
    if (!bits_.substr(pos_).starts_with(tag)) return false;
    pos_ += tag.size();
    return true;
  }

  std::optional<std::uint64_t> gnat() {
    auto g = gnat_decode(bits_.substr(pos_));
    if (!g) return std::nullopt;
    pos_ += g->consumed;
    return g->value;
  }

  /// Reads `width` bits as an unsigned integer (width <= 32).
  std::optional<std::uint32_t> raw(int width) {
    if (remaining() < static_cast<std::size_t>(width)) return std::nullopt;
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint32_t>(bits_[pos_++] - '0');
    return v;
  }

  std::size_t remaining() const { return bits_.size() - pos_; }
  bool done() const { return pos_ == bits_.size(); }

 private:
  std::string_view bits_;
  std::size_t pos_ = 0;
};

// Reads the trailing fixed-width index into a list of size s; the program must
// end exactly there.
std::optional<std::uint64_t> read_final_index(BitReader& in, std::uint64_t s) {
  if (s == 0) return std::nullopt;
  const int width = index_width(s);
  if (in.remaining() != static_cast<std::size_t>(width)) return std::nullopt;
  auto idx = in.raw(width);
  if (!idx || *idx >= s) return std::nullopt;
  return *idx;
}

// Members of `code` within distance e of y, in lex order.
std::vector<Word> near_list(const Code& code, const Word& y, int e) {
  std::vector<Word> out;
  for (const auto& w : code.members()) {
    if (std::popcount(w.value() ^ y.value()) <= e) out.push_back(w);
  }
  return out;
}

// Position of x in the near-list of y, and the near-list size.
std::pair<std::uint64_t, std::uint64_t> near_position(const Code& code, const Word& x, const Word& y, int e) {
  std::uint64_t before = 0;
  std::uint64_t total = 0;
  for (const auto& w : code.members()) {
    if (std::popcount(w.value() ^ y.value()) > e) continue;
    if (w < x) ++before;
    ++total;
  }
  return {before, total};
}

std::string concat(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

// Tracks the least program in (length, lex) order.
class ShortestSoFar {
 public:
  void offer(std::string bits) {
    if (!best_ || bits.size() < best_->size() || (bits.size() == best_->size() && bits < *best_)) {
      best_ = std::move(bits);
    }
  }
  /// True if a candidate of this length could still win.
  bool admits(std::size_t length) const { return !best_ || length <= best_->size(); }
  std::optional<Program> result() const {
    if (!best_) return std::nullopt;
    return Program(*best_);
  }

 private:
  std::optional<std::string> best_;
};

// Every level-0 conditional complexity is at most n+2 for n >= 1 and
// K(ε|ε) = 3, so W_0(n, e, lambda) is the whole cube once lambda >= n+3.
int codeword_lambda_cap(int n) { return n + 3; }

int clamp_lambda(std::uint64_t lambda, int cap) {
  return static_cast<int>(std::min<std::uint64_t>(lambda, static_cast<std::uint64_t>(cap)));
}

template <typename Fn>
void parallel_for(int workers, std::size_t count, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < count; i += static_cast<std::size_t>(workers)) fn(i);
    });
  }
}

}  // namespace

Program::Program(std::string bits) : bits_(std::move(bits)) {
  if (bits_.find_first_not_of("01") != std::string::npos) {
    throw ParameterError("program must consist of '0'/'1' characters");
  }
}

std::string gnat_encode(std::uint64_t m) {
  if (m == std::numeric_limits<std::uint64_t>::max()) throw ParameterError("gnat value too large");
  const std::uint64_t v = m + 1;
  const int b = std::bit_width(v);
  std::string out(static_cast<std::size_t>(b - 1), '0');
  for (int i = b - 1; i >= 0; --i) out += static_cast<char>('0' + ((v >> i) & 1U));
  return out;
}

int gnat_length(std::uint64_t m) {
  if (m == std::numeric_limits<std::uint64_t>::max()) return 129;
  return 2 * std::bit_width(m + 1) - 1;
}

std::optional<GnatValue> gnat_decode(std::string_view bits) {
  std::size_t zeros = 0;
  while (zeros < bits.size() && bits[zeros] == '0') ++zeros;
  if (zeros == bits.size() || zeros >= 64) return std::nullopt;
  const std::size_t consumed = 2 * zeros + 1;
  if (bits.size() < consumed) return std::nullopt;
  std::uint64_t v = 0;
  for (std::size_t i = zeros; i < consumed; ++i) v = (v << 1) | static_cast<std::uint64_t>(bits[i] - '0');
  return GnatValue{v - 1, consumed};
}

int index_width(std::uint64_t s) { return s <= 1 ? 0 : std::bit_width(s - 1); }

std::string fixed_index(std::uint64_t index, std::uint64_t s) {
  if (index >= s) throw ParameterError("index out of range");
  const int width = index_width(s);
  std::string out;
  for (int i = width - 1; i >= 0; --i) out += static_cast<char>('0' + ((index >> i) & 1U));
  return out;
}

std::string set_encode(const Code& code) {
  if (code.empty()) throw ParameterError("set_encode requires a nonempty code");
  std::string out = gnat_encode(code.size());
  for (const auto& w : code.members()) out += w.str();
  return out;
}

struct DescriptionSystem::Memo {
  MemoMap<std::tuple<int, int, int>, Code> greedy;
  MemoMap<int, std::vector<std::uint8_t>> conditional;
  MemoMap<std::pair<int, int>, std::vector<std::uint8_t>> unconditional;
  MemoMap<std::tuple<int, int, int>, Code> codewords;
};

DescriptionSystem::DescriptionSystem(SystemConfig config)
    : config_(std::move(config)), memo_(std::make_unique<Memo>()) {
  if (config_.n_max < 0 || config_.n_max > kWordCeiling) {
    throw ParameterError("N_MAX must lie in [0, " + std::to_string(kWordCeiling) + "]");
  }
  if (config_.enumeration_cap < 0) throw ParameterError("enumeration cap must be non-negative");
  if (config_.workers < 1) throw ParameterError("worker count must be at least 1");
}

DescriptionSystem::~DescriptionSystem() = default;

void DescriptionSystem::check_length(int n) const {
  if (n < 0 || n > config_.n_max) {
    throw ParameterError("word length " + std::to_string(n) + " exceeds N_MAX = " + std::to_string(config_.n_max));
  }
}

std::optional<Word> DescriptionSystem::decode(Level level, const Program& program, const Word& y) const {
  check_length(y.length());
  return decode_impl(level, program.bits(), y);
}

std::optional<Word> DescriptionSystem::decode_impl(Level level, std::string_view bits, const Word& y) const {
  BitReader in(bits);
  const int n = y.length();
  const bool conditional = !y.empty();

  if (in.take_tag(tag::rank)) {
    auto r = in.gnat();
    if (!conditional || !r || !in.done() || *r >= (std::uint64_t{1} << n)) return std::nullopt;
    return word_at_rank(y, *r);
  }

  if (in.take_tag(tag::lit)) {
    int out_len = n;
    if (!conditional) {
      auto declared = in.gnat();
      if (!declared || *declared > static_cast<std::uint64_t>(config_.n_max)) return std::nullopt;
      out_len = static_cast<int>(*declared);
    }
    if (in.remaining() != static_cast<std::size_t>(out_len)) return std::nullopt;
    return Word(out_len, *in.raw(out_len));
  }

  if (in.take_tag(tag::set)) {
    if (!conditional) return std::nullopt;
    auto radius = in.gnat();
    if (!radius || *radius > static_cast<std::uint64_t>(n)) return std::nullopt;
    auto count = in.gnat();
    if (!count || *count == 0 || *count > (std::uint64_t{1} << n)) return std::nullopt;
    if (in.remaining() < *count * static_cast<std::uint64_t>(n)) return std::nullopt;
    std::vector<Word> members;
    for (std::uint64_t i = 0; i < *count; ++i) {
      Word w(n, *in.raw(n));
      if (!members.empty() && !(members.back() < w)) return std::nullopt;
      members.push_back(w);
    }
    const auto near = near_list(Code::from_sorted(n, std::move(members)), y, static_cast<int>(*radius));
    auto idx = read_final_index(in, near.size());
    if (!idx) return std::nullopt;
    return near[*idx];
  }

  if (in.take_tag(tag::search)) {
    int out_len = n;
    if (!conditional) {
      auto declared = in.gnat();
      if (!declared || *declared > static_cast<std::uint64_t>(config_.n_max)) return std::nullopt;
      out_len = static_cast<int>(*declared);
    }
    auto radius = in.gnat();
    if (!radius || *radius > static_cast<std::uint64_t>(out_len)) return std::nullopt;
    auto lambda = in.gnat();
    if (!lambda) return std::nullopt;
    const Code& code = greedy_code(out_len, static_cast<int>(*radius), *lambda);
    if (!conditional) {
      auto idx = read_final_index(in, code.size());
      if (!idx) return std::nullopt;
      return code.members()[*idx];
    }
    const auto near = near_list(code, y, static_cast<int>(*radius));
    auto idx = read_final_index(in, near.size());
    if (!idx) return std::nullopt;
    return near[*idx];
  }

  if (in.take_tag(tag::enumerate)) {
    if (level == Level::zero || conditional) return std::nullopt;
    auto declared = in.gnat();
    if (!declared || *declared > static_cast<std::uint64_t>(config_.n_max)) return std::nullopt;
    const int out_len = static_cast<int>(*declared);
    auto radius = in.gnat();
    if (!radius || *radius > static_cast<std::uint64_t>(out_len)) return std::nullopt;
    auto lambda = in.gnat();
    if (!lambda) return std::nullopt;
    const Code& words = level0_codeword_set(out_len, static_cast<int>(*radius), *lambda);
    auto idx = read_final_index(in, words.size());
    if (!idx) return std::nullopt;
    return words.members()[*idx];
  }

  return std::nullopt;
}

std::optional<Program> DescriptionSystem::shortest_program(Level level, const Word& x, const Word& y) const {
  check_length(x.length());
  check_length(y.length());
  ShortestSoFar best;

  if (!y.empty()) {
    if (x.length() != y.length()) return std::nullopt;
    const int n = y.length();
    best.offer(concat({tag::rank, gnat_encode(rank_of(y, x))}));
    best.offer(concat({tag::lit, x.str()}));
    // SET programs are never shorter than n + 7 > n + 2, the LIT length.
    const int d = distance(x, y);
    for (int e = d; e <= n; ++e) {
      for (int lambda = 0; lambda <= saturation_lambda(n, e); ++lambda) {
        const std::size_t header = tag::search.size() + gnat_length(e) + gnat_length(lambda);
        if (!best.admits(header)) continue;
        const Code& code = greedy_code(n, e, lambda);
        if (!code.contains(x)) continue;
        auto [index, s] = near_position(code, x, y, e);
        best.offer(concat({tag::search, gnat_encode(e), gnat_encode(lambda), fixed_index(index, s)}));
      }
    }
    return best.result();
  }

  const int n = x.length();
  const std::string n_bits = gnat_encode(n);
  best.offer(concat({tag::lit, n_bits, x.str()}));
  for (int e = 0; e <= n; ++e) {
    for (int lambda = 0; lambda <= saturation_lambda(n, e); ++lambda) {
      const std::size_t header = tag::search.size() + n_bits.size() + gnat_length(e) + gnat_length(lambda);
      if (!best.admits(header)) continue;
      const Code& code = greedy_code(n, e, lambda);
      auto index = code.index_of(x);
      if (index < 0) continue;
      best.offer(concat({tag::search, n_bits, gnat_encode(e), gnat_encode(lambda),
                         fixed_index(static_cast<std::uint64_t>(index), code.size())}));
    }
  }
  if (level == Level::one) {
    for (int e = 0; e <= n; ++e) {
      for (int lambda = 0; lambda <= codeword_lambda_cap(n); ++lambda) {
        const std::size_t header = tag::enumerate.size() + n_bits.size() + gnat_length(e) + gnat_length(lambda);
        if (!best.admits(header)) continue;
        const Code& words = level0_codeword_set(n, e, lambda);
        auto index = words.index_of(x);
        if (index < 0) continue;
        best.offer(concat({tag::enumerate, n_bits, gnat_encode(e), gnat_encode(lambda),
                           fixed_index(static_cast<std::uint64_t>(index), words.size())}));
      }
    }
  }
  return best.result();
}

std::optional<int> DescriptionSystem::complexity_value(Level level, const Word& x, const Word& y) const {
  check_length(x.length());
  check_length(y.length());
  if (!y.empty() && x.length() != y.length()) return std::nullopt;
  const int n = x.length();
  if (n <= kTableMaxN) {
    if (y.empty()) return unconditional_table(level, n)[x.value()];
    return conditional_table(n)[(static_cast<std::size_t>(y.value()) << n) | x.value()];
  }
  return static_cast<int>(shortest_program(level, x, y)->length());
}

ComplexityResult DescriptionSystem::complexity(Level level, const Word& x, const Word& y, int max_length) const {
  if (max_length < 0) throw ParameterError("length bound must be non-negative");
  if (max_length > config_.enumeration_cap) {
    throw ResourceError("length bound " + std::to_string(max_length) + " exceeds enumeration cap " +
                        std::to_string(config_.enumeration_cap));
  }
  ComplexityResult result{std::nullopt, std::nullopt, level, x, y};
  auto program = shortest_program(level, x, y);
  if (!program || program->length() > static_cast<std::size_t>(max_length)) return result;
  if (config_.verify_witnesses) {
    auto out = decode(level, *program, y);
    if (!out || *out != x) throw std::logic_error("witness " + program->bits() + " does not decode to " + x.str());
  }
  result.value = static_cast<int>(program->length());
  result.witness = std::move(program);
  return result;
}

bool DescriptionSystem::complexity_le(Level level, const Word& x, const Word& y, int bound) const {
  if (bound < 0) throw ParameterError("length bound must be non-negative");
  if (bound > config_.enumeration_cap) {
    throw ResourceError("length bound " + std::to_string(bound) + " exceeds enumeration cap " +
                        std::to_string(config_.enumeration_cap));
  }
  auto k = complexity_value(level, x, y);
  return k && *k <= bound;
}

const Code& DescriptionSystem::greedy_code(int n, int e, std::uint64_t lambda) const {
  check_length(n);
  if (e < 0 || e > n) throw ParameterError("radius e must satisfy 0 <= e <= n");
  const int effective = clamp_lambda(lambda, saturation_lambda(n, e));
  return memo_->greedy.get({n, e, effective}, [&] { return greedy_lex_code(CodeParams(n, e, effective)); });
}

const std::vector<std::uint8_t>& DescriptionSystem::conditional_table(int n) const {
  check_length(n);
  if (n < 1 || n > kTableMaxN) throw ResourceError("conditional tables exist for 1 <= n <= " + std::to_string(kTableMaxN));
  return memo_->conditional.get(n, [&] { return build_conditional_table(n); });
}

const std::vector<std::uint8_t>& DescriptionSystem::unconditional_table(Level level, int n) const {
  check_length(n);
  if (n > kTableMaxN) throw ResourceError("unconditional tables exist for n <= " + std::to_string(kTableMaxN));
  return memo_->unconditional.get({static_cast<int>(level), n}, [&] { return build_unconditional_table(level, n); });
}

std::vector<std::uint8_t> DescriptionSystem::build_conditional_table(int n) const {
  const std::size_t cube = std::size_t{1} << n;
  const auto lit = static_cast<std::uint8_t>(n + 2);
  std::vector<std::uint8_t> table(cube * cube, lit);

  // Warm the greedy codes sequentially so workers only read them.
  struct Header {
    int e;
    int lambda;
    std::size_t length;
    const Code* code;
  };
  std::vector<Header> headers;
  for (int e = 0; e <= n; ++e) {
    for (int lambda = 0; lambda <= saturation_lambda(n, e); ++lambda) {
      const std::size_t header = tag::search.size() + gnat_length(e) + gnat_length(lambda);
      if (header > lit) continue;
      headers.push_back({e, lambda, header, &greedy_code(n, e, lambda)});
    }
  }

  parallel_for(config_.workers, cube, [&](std::size_t yv) {
    const Word y(n, static_cast<std::uint32_t>(yv));
    std::uint8_t* row = table.data() + (yv << n);
    for (std::uint32_t xv = 0; xv < cube; ++xv) {
      const auto rank_len = 1 + gnat_length(rank_of(y, Word(n, xv)));
      row[xv] = static_cast<std::uint8_t>(std::min<int>(row[xv], rank_len));
    }
    for (const auto& h : headers) {
      const auto near = near_list(*h.code, y, h.e);
      if (near.empty()) continue;
      const auto len = static_cast<std::uint8_t>(h.length + index_width(near.size()));
      for (const auto& w : near) row[w.value()] = std::min(row[w.value()], len);
    }
  });
  return table;
}

std::vector<std::uint8_t> DescriptionSystem::build_unconditional_table(Level level, int n) const {
  const std::size_t cube = std::size_t{1} << n;
  const int n_bits = gnat_length(n);
  std::vector<std::uint8_t> table(cube, static_cast<std::uint8_t>(tag::lit.size() + n_bits + n));
  auto lower = [&](const Code& code, std::size_t header) {
    if (code.empty()) return;
    const auto len = static_cast<std::uint8_t>(header + index_width(code.size()));
    for (const auto& w : code.members()) table[w.value()] = std::min(table[w.value()], len);
  };
  for (int e = 0; e <= n; ++e) {
    for (int lambda = 0; lambda <= saturation_lambda(n, e); ++lambda) {
      lower(greedy_code(n, e, lambda), tag::search.size() + n_bits + gnat_length(e) + gnat_length(lambda));
    }
  }
  if (level == Level::one) {
    for (int e = 0; e <= n; ++e) {
      for (int lambda = 0; lambda <= codeword_lambda_cap(n); ++lambda) {
        lower(level0_codeword_set(n, e, lambda),
              tag::enumerate.size() + n_bits + gnat_length(e) + gnat_length(lambda));
      }
    }
  }
  return table;
}

std::vector<int> DescriptionSystem::ball_max(Level level, int n, int e) const {
  check_length(n);
  if (e < 0 || e > n) throw ParameterError("radius e must satisfy 0 <= e <= n");
  if (n == 0) return {*complexity_value(level, Word(), Word())};

  const std::size_t cube = std::size_t{1} << n;
  std::vector<int> out(cube, 0);
  const auto masks = ball_masks(n, e);
  if (n <= kTableMaxN) {
    const auto& table = conditional_table(n);
    for (std::size_t x = 0; x < cube; ++x) {
      for (auto m : masks) out[x] = std::max<int>(out[x], table[((x ^ m) << n) | x]);
    }
    return out;
  }
  parallel_for(config_.workers, cube, [&](std::size_t xv) {
    const Word x(n, static_cast<std::uint32_t>(xv));
    for (auto m : masks) {
      out[xv] = std::max(out[xv], static_cast<int>(shortest_program(level, x, Word(n, x.value() ^ m))->length()));
    }
  });
  return out;
}

const Code& DescriptionSystem::level0_codeword_set(int n, int e, std::uint64_t lambda) const {
  check_length(n);
  if (e < 0 || e > n) throw ParameterError("radius e must satisfy 0 <= e <= n");
  const int effective = clamp_lambda(lambda, codeword_lambda_cap(n));
  return memo_->codewords.get({n, e, effective}, [&] {
    const auto worst = ball_max(Level::zero, n, e);
    std::vector<Word> members;
    for (std::size_t x = 0; x < worst.size(); ++x) {
      if (worst[x] <= effective) members.emplace_back(n, static_cast<std::uint32_t>(x));
    }
    return Code::from_sorted(n, std::move(members));
  });
}

MemoSnapshot DescriptionSystem::snapshot() const {
  MemoSnapshot s;
  s.greedy_codes = memo_->greedy.ready_entries();
  s.conditional_tables = memo_->conditional.ready_entries();
  s.unconditional_tables = memo_->unconditional.ready_entries();
  s.codeword_sets = memo_->codewords.ready_entries();
  return s;
}

void DescriptionSystem::preload(const MemoSnapshot& s) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw IntegrityError("cached " + what + " disagrees with an existing entry");
  };
  for (const auto& [k, v] : s.greedy_codes) check(memo_->greedy.preload(k, v), "greedy code");
  for (const auto& [k, v] : s.conditional_tables) check(memo_->conditional.preload(k, v), "complexity table");
  for (const auto& [k, v] : s.unconditional_tables) check(memo_->unconditional.preload(k, v), "complexity table");
  for (const auto& [k, v] : s.codeword_sets) check(memo_->codewords.preload(k, v), "codeword set");
}

}  // namespace cwlab
