#include "cwlab/cache.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "cwlab/errors.hpp"

namespace cwlab {
namespace {

using nlohmann::ordered_json;

std::optional<CacheKind> kind_from_string(const std::string& s) {
  if (s == "greedy_code") return CacheKind::greedy_code;
  if (s == "codeword_set") return CacheKind::codeword_set;
  if (s == "complexity_table") return CacheKind::complexity_table;
  return std::nullopt;
}

ordered_json code_to_json(const Code& code) {
  ordered_json words = ordered_json::array();
  for (const auto& w : code.members()) words.push_back(w.str());
  return {{"n", code.n()}, {"members", words}};
}

Code code_from_json(const ordered_json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Word> words;
  for (const auto& w : j.at("members")) words.push_back(Word::parse(w.get<std::string>()));
  return Code::from_sorted(n, std::move(words));
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json entry_to_json(const CacheEntry& e) {
  return {{"key",
           {{"version_tag", e.key.version_tag},
            {"n_max", e.key.n_max},
            {"kind", to_string(e.key.kind)},
            {"params", e.key.params}}},
          {"value", e.value},
          {"created", e.created}};
}

CacheEntry entry_from_json(const ordered_json& j) {
  CacheEntry e;
  const auto& key = j.at("key");
  e.key.version_tag = key.at("version_tag").get<std::string>();
  e.key.n_max = key.at("n_max").get<int>();
  auto kind = kind_from_string(key.at("kind").get<std::string>());
  if (!kind) throw IntegrityError("unknown cache entry kind");
  e.key.kind = *kind;
  e.key.params = key.at("params");
  e.value = j.at("value");
  e.created = j.value("created", "");
  return e;
}

}  // namespace

std::string to_string(CacheKind kind) {
  switch (kind) {
    case CacheKind::greedy_code: return "greedy_code";
    case CacheKind::codeword_set: return "codeword_set";
    case CacheKind::complexity_table: return "complexity_table";
  }
  return "?";
}

std::string CacheKey::canonical() const {
  return ordered_json{{"version_tag", version_tag}, {"n_max", n_max}, {"kind", to_string(kind)}, {"params", params}}
      .dump();
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)), file_(dir_ / "cache.jsonl") {}

void ResultCache::load() {
  std::ifstream in(file_);
  if (!in) return;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      put(entry_from_json(ordered_json::parse(line)));
    } catch (const IntegrityError&) {
      throw;
    } catch (const std::exception& ex) {
      throw IntegrityError(file_.string() + ":" + std::to_string(lineno) + ": malformed cache entry: " + ex.what());
    }
  }
}

void ResultCache::save() const {
  std::filesystem::create_directories(dir_);
  auto tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IntegrityError("cannot write cache file " + tmp.string());
    for (const auto& [_, entry] : entries_) out << entry_to_json(entry).dump() << '\n';
    if (!out) throw IntegrityError("failed writing cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file_);
}

void ResultCache::put(CacheEntry entry) {
  auto key = entry.key.canonical();
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (entry.created.empty()) entry.created = now_utc();
    entries_.emplace(std::move(key), std::move(entry));
    return;
  }
  if (it->second.value != entry.value) throw IntegrityError("cache key collision with differing value: " + key);
}

std::optional<ordered_json> ResultCache::find(const CacheKey& key) const {
  auto it = entries_.find(key.canonical());
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

MemoSnapshot ResultCache::snapshot_for(const SystemConfig& config) const {
  MemoSnapshot s;
  for (const auto& [_, e] : entries_) {
    if (e.key.version_tag != config.version_tag || e.key.n_max != config.n_max) continue;
    const auto& p = e.key.params;
    try {
      switch (e.key.kind) {
        case CacheKind::greedy_code:
          s.greedy_codes.emplace(std::tuple{p.at("n").get<int>(), p.at("e").get<int>(), p.at("lambda").get<int>()},
                                 code_from_json(e.value));
          break;
        case CacheKind::codeword_set:
          if (p.at("level").get<int>() != 0) break;
          s.codeword_sets.emplace(std::tuple{p.at("n").get<int>(), p.at("e").get<int>(), p.at("lambda").get<int>()},
                                  code_from_json(e.value));
          break;
        case CacheKind::complexity_table: {
          auto table = e.value.get<std::vector<std::uint8_t>>();
          if (p.at("condition").get<std::string>() == "all") {
            s.conditional_tables.emplace(p.at("n").get<int>(), std::move(table));
          } else {
            s.unconditional_tables.emplace(std::pair{p.at("level").get<int>(), p.at("n").get<int>()}, std::move(table));
          }
          break;
        }
      }
    } catch (const nlohmann::json::exception& ex) {
      throw IntegrityError(std::string("malformed cache entry: ") + ex.what());
    }
  }
  return s;
}

void ResultCache::absorb(const MemoSnapshot& s, const SystemConfig& config) {
  auto key = [&](CacheKind kind, ordered_json params) {
    return CacheKey{config.version_tag, config.n_max, kind, std::move(params)};
  };
  for (const auto& [k, code] : s.greedy_codes) {
    const auto& [n, e, lambda] = k;
    put({key(CacheKind::greedy_code, {{"n", n}, {"e", e}, {"lambda", lambda}}), code_to_json(code), {}});
  }
  for (const auto& [k, code] : s.codeword_sets) {
    const auto& [n, e, lambda] = k;
    put({key(CacheKind::codeword_set, {{"level", 0}, {"n", n}, {"e", e}, {"lambda", lambda}}), code_to_json(code), {}});
  }
  for (const auto& [n, table] : s.conditional_tables) {
    put({key(CacheKind::complexity_table, {{"condition", "all"}, {"n", n}}), ordered_json(table), {}});
  }
  for (const auto& [k, table] : s.unconditional_tables) {
    put({key(CacheKind::complexity_table, {{"condition", "empty"}, {"level", k.first}, {"n", k.second}}),
         ordered_json(table), {}});
  }
}

}  // namespace cwlab
