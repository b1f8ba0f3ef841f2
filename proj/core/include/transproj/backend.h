#pragma once

// Batch translation backends.
//
// Every backend maps an ordered list of texts to the same number of
// translated texts. The offline backends (identity, dictionary, scrambler)
// are deterministic and treat placeholders as opaque words, which makes the
// whole projection pipeline testable without a translation service.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace transproj {

class TranslationCache;

struct TranslationRequest {
  std::vector<std::string> texts;
  std::string source_lang;
  std::string target_lang;
};

class BackendError : public std::runtime_error {
 public:
  enum class Kind { kUnavailable, kProtocol };

  BackendError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Implementations must tolerate concurrent translate() calls.
class Backend {
 public:
  virtual ~Backend() = default;

  // Stable identifier, part of every cache key.
  virtual std::string id() const = 0;

  virtual std::vector<std::string> translate(const TranslationRequest& request) = 0;
};

// Checks the request (non-empty, no empty texts) and the response
// cardinality around backend.translate().
std::vector<std::string> translate_batch(const TranslationRequest& request,
                                         Backend& backend);

// Splits text into words, keeping every placeholder (tolerant grammar) as a
// single unit even when it contains whitespace.
std::vector<std::string> split_units(std::string_view text);

class IdentityBackend : public Backend {
 public:
  std::string id() const override { return "identity"; }
  std::vector<std::string> translate(const TranslationRequest& request) override;
};

// Word-by-word lookup; unknown words and placeholders pass through, and the
// output words are joined with single spaces. An entry with an empty target
// deletes the word.
class DictionaryBackend : public Backend {
 public:
  explicit DictionaryBackend(std::unordered_map<std::string, std::string> entries,
                             std::string name = "dict");

  // "source<TAB>target" per line; blank lines are ignored.
  static DictionaryBackend from_tsv(std::string_view tsv, std::string name = "dict");
  static DictionaryBackend load(const std::filesystem::path& path);

  std::string id() const override { return name_; }
  std::vector<std::string> translate(const TranslationRequest& request) override;

  std::string translate_text(std::string_view text) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::string name_;
};

// Reorders the words of every text. Used to simulate engines that move
// entities around.
class ScramblerBackend : public Backend {
 public:
  enum class Mode { kReverse, kRotate, kShuffle };

  // kRotate rotates left by |param| positions; kShuffle seeds a Fisher-Yates
  // shuffle with |param| mixed with a hash of the text.
  ScramblerBackend(Mode mode, std::uint64_t param);

  std::string id() const override;
  std::vector<std::string> translate(const TranslationRequest& request) override;

  // Output word j is input word order[j] for a text of |count| units.
  std::vector<std::size_t> order(std::size_t count, std::string_view text) const;
  std::string scramble(std::string_view text) const;

 private:
  Mode mode_;
  std::uint64_t param_;
};

// Consults the cache before forwarding misses to the wrapped backend and
// records every new translation. Duplicate texts within a request are
// translated once.
class CachedBackend : public Backend {
 public:
  CachedBackend(Backend& inner, TranslationCache& cache);

  std::string id() const override { return inner_.id(); }
  std::vector<std::string> translate(const TranslationRequest& request) override;

  std::size_t cache_hits() const { return hits_.load(); }
  std::size_t cache_misses() const { return misses_.load(); }
  std::size_t backend_calls() const { return calls_.load(); }

 private:
  Backend& inner_;
  TranslationCache& cache_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
  std::atomic<std::size_t> calls_{0};
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace transproj
