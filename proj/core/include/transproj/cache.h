#pragma once

// Append-only translation cache.
//
// On disk the cache is UTF-8 JSON lines, one record per line:
//
//   {"backend_id":"http:...","source_lang":"en","target_lang":"fa",
//    "source_text":"...","target_text":"..."}
//
// Records are never rewritten. When a key appears more than once the last
// line wins on load. A file-backed cache holds an exclusive advisory lock on
// the file for its lifetime, so only one run can use a cache file at a time.

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace transproj {

struct CacheKey {
  std::string backend_id;
  std::string source_lang;
  std::string target_lang;
  std::string source_text;
};

struct CacheRecord {
  std::string backend_id;
  std::string source_lang;
  std::string target_lang;
  std::string source_text;
  std::string target_text;

  CacheKey key() const { return {backend_id, source_lang, target_lang, source_text}; }
};

// A line that could not be read back; the rest of the file still loads.
struct CacheCorrupt {
  std::size_t line = 0;  // 1-based
  std::string message;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TranslationCache {
 public:
  // Memory only; nothing is persisted.
  TranslationCache();
  // Loads |path| if it exists and appends new records to it. Throws
  // CacheError if the file cannot be opened or is locked by another process.
  explicit TranslationCache(const std::filesystem::path& path);
  ~TranslationCache();

  TranslationCache(const TranslationCache&) = delete;
  TranslationCache& operator=(const TranslationCache&) = delete;

  std::optional<std::string> lookup(const CacheKey& key) const;
  void store(const CacheRecord& record);

  std::size_t size() const;
  const std::vector<CacheCorrupt>& load_errors() const { return load_errors_; }
  bool persistent() const { return fd_ >= 0; }

  static std::string encode(const CacheRecord& record);
  // Throws std::runtime_error on anything but a complete record.
  static CacheRecord decode(std::string_view line);

 private:
  void load(const std::filesystem::path& path);

  mutable std::shared_mutex index_mutex_;
  std::unordered_map<std::string, std::string> index_;
  std::mutex writer_mutex_;
  int fd_ = -1;
  std::vector<CacheCorrupt> load_errors_;
};

}  // namespace transproj
