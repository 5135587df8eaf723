#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "cwlab/descsys.hpp"

namespace cwlab {

enum class CacheKind { greedy_code, codeword_set, complexity_table };
std::string to_string(CacheKind kind);

struct CacheKey {
  std::string version_tag;
  int n_max = kDefaultNMax;
  CacheKind kind = CacheKind::greedy_code;
  nlohmann::ordered_json params;

  /// Canonical single-line form; unique per key.
  std::string canonical() const;
};

struct CacheEntry {
  CacheKey key;
  nlohmann::ordered_json value;
  std::string created;
};

/// On-disk result cache: `<dir>/cache.jsonl`, one entry per line, rewritten
/// through a temporary file and an atomic rename.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  const std::filesystem::path& file() const { return file_; }

  /// Reads the file if present. Malformed lines and duplicate keys with
  /// differing values raise IntegrityError.
  void load();
  void save() const;

  /// Inserting an existing key is a no-op when the value matches and an
  /// IntegrityError otherwise.
  void put(CacheEntry entry);
  std::optional<nlohmann::ordered_json> find(const CacheKey& key) const;
  std::size_t size() const { return entries_.size(); }

  /// Entries for this system's version tag and N_MAX, as a memo snapshot.
  MemoSnapshot snapshot_for(const SystemConfig& config) const;
  /// Records every memoized result of the snapshot.
  void absorb(const MemoSnapshot& snapshot, const SystemConfig& config);

 private:
  std::filesystem::path dir_;
  std::filesystem::path file_;
  std::map<std::string, CacheEntry> entries_;
};

}  // namespace cwlab
