#include "transproj/backend.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "transproj/cache.h"
#include "transproj/placeholder.h"
#include "transproj/text.h"

namespace transproj {

std::vector<std::string> translate_batch(const TranslationRequest& request,
                                         Backend& backend) {
  if (request.texts.empty()) {
    throw std::invalid_argument("translation request without texts");
  }
  for (const std::string& text : request.texts) {
    if (text.empty()) throw std::invalid_argument("empty text in translation request");
  }
  std::vector<std::string> out = backend.translate(request);
  if (out.size() != request.texts.size()) {
    throw BackendError(BackendError::Kind::kProtocol,
                       backend.id() + " returned " + std::to_string(out.size()) +
                           " translations for " +
                           std::to_string(request.texts.size()) + " texts");
  }
  return out;
}

std::vector<std::string> split_units(std::string_view text) {
  std::vector<std::string> units;
  std::size_t pos = 0;
  for (const PlaceholderHit& hit : find_placeholders(text)) {
    for (std::string& word : split_whitespace(text.substr(pos, hit.byte_begin - pos))) {
      units.push_back(std::move(word));
    }
    units.push_back(hit.matched_text);
    pos = hit.byte_end;
  }
  for (std::string& word : split_whitespace(text.substr(pos))) {
    units.push_back(std::move(word));
  }
  return units;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<std::string> IdentityBackend::translate(const TranslationRequest& request) {
  return request.texts;
}

DictionaryBackend::DictionaryBackend(
    std::unordered_map<std::string, std::string> entries, std::string name)
    : entries_(std::move(entries)), name_(std::move(name)) {}

DictionaryBackend DictionaryBackend::from_tsv(std::string_view tsv, std::string name) {
  std::unordered_map<std::string, std::string> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim_whitespace(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw std::runtime_error("dictionary line " + std::to_string(line_no) +
                               ": expected source<TAB>target");
    }
    entries[std::string(line.substr(0, tab))] = std::string(line.substr(tab + 1));
  }
  return DictionaryBackend(std::move(entries), std::move(name));
}

DictionaryBackend DictionaryBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dictionary " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  // The path is part of the id so that different dictionaries never share
  // cache entries.
  return from_tsv(buffer.str(), "dict:" + path.string());
}

std::string DictionaryBackend::translate_text(std::string_view text) const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  const auto translate_words = [&](std::string_view segment) {
    for (std::string& word : split_whitespace(segment)) {
      auto it = entries_.find(word);
      if (it == entries_.end()) {
        out.push_back(std::move(word));
      } else if (!trim_whitespace(it->second).empty()) {
        out.push_back(it->second);
      }
    }
  };
  for (const PlaceholderHit& hit : find_placeholders(text)) {
    translate_words(text.substr(pos, hit.byte_begin - pos));
    out.push_back(hit.matched_text);
    pos = hit.byte_end;
  }
  translate_words(text.substr(pos));
  return join(out, " ");
}

std::vector<std::string> DictionaryBackend::translate(const TranslationRequest& request) {
  std::vector<std::string> out;
  out.reserve(request.texts.size());
  for (const std::string& text : request.texts) out.push_back(translate_text(text));
  return out;
}

ScramblerBackend::ScramblerBackend(Mode mode, std::uint64_t param)
    : mode_(mode), param_(param) {}

std::string ScramblerBackend::id() const {
  switch (mode_) {
    case Mode::kReverse:
      return "scramble:reverse";
    case Mode::kRotate:
      return "scramble:rotate:" + std::to_string(param_);
    case Mode::kShuffle:
      return "scramble:" + std::to_string(param_);
  }
  return "scramble";
}

std::vector<std::size_t> ScramblerBackend::order(std::size_t count,
                                                 std::string_view text) const {
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (count < 2) return perm;
  switch (mode_) {
    case Mode::kReverse:
      std::reverse(perm.begin(), perm.end());
      break;
    case Mode::kRotate:
      std::rotate(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(param_ % count),
                  perm.end());
      break;
    case Mode::kShuffle: {
      // mt19937_64 output is fixed by the standard; the distributions are
      // not, so the draw is done by hand.
      std::mt19937_64 rng(param_ ^ fnv1a64(text));
      for (std::size_t i = count - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(perm[i], perm[j]);
      }
      break;
    }
  }
  return perm;
}

std::string ScramblerBackend::scramble(std::string_view text) const {
  const std::vector<std::string> units = split_units(text);
  const std::vector<std::size_t> perm = order(units.size(), text);
  std::vector<std::string> out;
  out.reserve(units.size());
  for (const std::size_t k : perm) out.push_back(units[k]);
  return join(out, " ");
}

std::vector<std::string> ScramblerBackend::translate(const TranslationRequest& request) {
  std::vector<std::string> out;
  out.reserve(request.texts.size());
  for (const std::string& text : request.texts) out.push_back(scramble(text));
  return out;
}

CachedBackend::CachedBackend(Backend& inner, TranslationCache& cache)
    : inner_(inner), cache_(cache) {}

std::vector<std::string> CachedBackend::translate(const TranslationRequest& request) {
  const std::string backend_id = inner_.id();
  std::vector<std::string> out(request.texts.size());
  std::vector<bool> resolved(request.texts.size(), false);

  TranslationRequest misses{{}, request.source_lang, request.target_lang};
  std::unordered_map<std::string, std::size_t> miss_slot;
  for (std::size_t i = 0; i < request.texts.size(); ++i) {
    const std::string& text = request.texts[i];
    if (auto hit = cache_.lookup({backend_id, request.source_lang,
                                  request.target_lang, text})) {
      out[i] = std::move(*hit);
      resolved[i] = true;
      ++hits_;
    } else if (miss_slot.emplace(text, misses.texts.size()).second) {
      misses.texts.push_back(text);
    }
  }
  if (!misses.texts.empty()) {
    ++calls_;
    misses_ += misses.texts.size();
    const std::vector<std::string> translated = translate_batch(misses, inner_);
    for (std::size_t k = 0; k < misses.texts.size(); ++k) {
      cache_.store({backend_id, request.source_lang, request.target_lang,
                    misses.texts[k], translated[k]});
    }
    for (std::size_t i = 0; i < request.texts.size(); ++i) {
      if (!resolved[i]) out[i] = translated[miss_slot.at(request.texts[i])];
    }
  }
  return out;
}

}  // namespace transproj
