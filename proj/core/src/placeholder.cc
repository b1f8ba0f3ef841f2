#include "transproj/placeholder.h"

#include <limits>
#include <set>

#include "transproj/text.h"

namespace transproj {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t push_digit(std::uint64_t value, int digit) {
  if (value > (kSaturated - static_cast<std::uint64_t>(digit)) / 10) {
    return kSaturated;
  }
  return value * 10 + static_cast<std::uint64_t>(digit);
}

void append_tokens(std::string_view segment, const Tag& tag,
                   TaggedSentence* out) {
  for (std::string& token : split_whitespace(segment)) {
    out->tokens.push_back(std::move(token));
    out->tags.push_back(tag);
  }
}

}  // namespace

std::vector<std::string> MaskedSentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(entities.size());
  for (const EntitySpan& e : entities) out.push_back(e.surface);
  return out;
}

std::vector<std::string> MaskedSentence::labels() const {
  std::vector<std::string> out;
  out.reserve(entities.size());
  for (const EntitySpan& e : entities) out.push_back(e.label);
  return out;
}

std::string placeholder_for(std::size_t index) {
  return "[*" + std::to_string(index) + "*]";
}

std::vector<PlaceholderHit> find_placeholders(std::string_view text) {
  const std::vector<CodePoint> cps = decode_utf8(text);
  const std::size_t n = cps.size();
  std::vector<PlaceholderHit> hits;

  const auto skip_ws = [&](std::size_t j) {
    while (j < n && is_unicode_whitespace(cps[j].value)) ++j;
    return j;
  };

  std::size_t i = 0;
  while (i < n) {
    if (cps[i].value != U'[') {
      ++i;
      continue;
    }
    std::size_t j = skip_ws(i + 1);
    if (j >= n || cps[j].value != U'*') {
      ++i;
      continue;
    }
    j = skip_ws(j + 1);
    std::uint64_t index = 0;
    std::size_t digits = 0;
    while (j < n) {
      const auto digit = decimal_digit_value(cps[j].value);
      if (!digit) break;
      index = push_digit(index, *digit);
      ++digits;
      ++j;
    }
    if (digits == 0) {
      ++i;
      continue;
    }
    j = skip_ws(j);
    if (j >= n || cps[j].value != U'*') {
      ++i;
      continue;
    }
    j = skip_ws(j + 1);
    if (j >= n || cps[j].value != U']') {
      ++i;
      continue;
    }
    PlaceholderHit hit;
    hit.index = index;
    hit.char_begin = i;
    hit.char_end = j + 1;
    hit.byte_begin = cps[i].offset;
    hit.byte_end = cps[j].offset + cps[j].length;
    hit.matched_text = std::string(
        text.substr(hit.byte_begin, hit.byte_end - hit.byte_begin));
    hits.push_back(std::move(hit));
    i = j + 1;
  }
  return hits;
}

MaskedSentence mask(const TaggedSentence& sentence) {
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (!find_placeholders(sentence.tokens[i]).empty()) {
      throw CodecError(CodecError::Kind::kPatternCollision,
                       "token " + std::to_string(i) + " '" +
                           sentence.tokens[i] + "' reads as a placeholder");
    }
  }

  MaskedSentence masked;
  masked.entities = extract_spans(sentence);

  std::vector<std::string> pieces;
  std::size_t next_entity = 0;
  for (std::size_t i = 0; i < sentence.tokens.size();) {
    if (next_entity < masked.entities.size() &&
        masked.entities[next_entity].start == i) {
      pieces.push_back(placeholder_for(next_entity));
      i = masked.entities[next_entity].end;
      ++next_entity;
    } else {
      pieces.push_back(sentence.tokens[i]);
      ++i;
    }
  }
  masked.text = join(pieces, " ");

  // Tokens like "[*" "1" "*]" only form a placeholder once joined.
  const std::vector<PlaceholderHit> hits = find_placeholders(masked.text);
  bool clean = hits.size() == masked.entities.size();
  for (std::size_t k = 0; clean && k < hits.size(); ++k) {
    clean = hits[k].index == k && hits[k].matched_text == placeholder_for(k);
  }
  if (!clean) {
    throw CodecError(CodecError::Kind::kPatternCollision,
                     "adjacent source tokens form a placeholder pattern");
  }
  return masked;
}

TaggedSentence unmask(std::string_view translated_template,
                      const std::vector<std::string>& translated_entities,
                      const std::vector<std::string>& labels) {
  if (translated_entities.size() != labels.size()) {
    throw std::invalid_argument("entity and label counts differ");
  }
  const std::vector<PlaceholderHit> hits = find_placeholders(translated_template);

  std::vector<bool> seen(translated_entities.size(), false);
  for (const PlaceholderHit& hit : hits) {
    if (hit.index >= translated_entities.size()) {
      throw CodecError(CodecError::Kind::kUnknownIndex,
                       "placeholder '" + hit.matched_text + "' has no entity");
    }
    if (seen[hit.index]) {
      throw CodecError(CodecError::Kind::kDuplicateIndex,
                       "placeholder index " + std::to_string(hit.index) +
                           " appears more than once");
    }
    seen[hit.index] = true;
  }
  for (std::size_t i = 0; i < translated_entities.size(); ++i) {
    if (trim_whitespace(translated_entities[i]).empty()) {
      throw CodecError(CodecError::Kind::kEmptyEntityTranslation,
                       "entity " + std::to_string(i) + " translated to nothing");
    }
  }

  TaggedSentence out;
  std::size_t pos = 0;
  for (const PlaceholderHit& hit : hits) {
    append_tokens(translated_template.substr(pos, hit.byte_begin - pos),
                  Tag::outside(), &out);
    const std::vector<std::string> words =
        split_whitespace(translated_entities[hit.index]);
    const std::string& label = labels[hit.index];
    for (std::size_t w = 0; w < words.size(); ++w) {
      out.tokens.push_back(words[w]);
      out.tags.push_back(w == 0 ? Tag::begin(label) : Tag::inside(label));
    }
    pos = hit.byte_end;
  }
  append_tokens(translated_template.substr(pos), Tag::outside(), &out);

  if (out.tokens.empty()) {
    throw CodecError(CodecError::Kind::kEmptyResult,
                     "translation produced no tokens");
  }
  return out;
}

CountCheckResult count_check(const MaskedSentence& masked,
                             std::string_view translated_template) {
  const std::size_t n = masked.entities.size();
  const std::vector<PlaceholderHit> hits = find_placeholders(translated_template);

  std::set<std::uint64_t> indices;
  for (const PlaceholderHit& hit : hits) {
    if (!indices.insert(hit.index).second) {
      return {CountCheck::kDuplicatePlaceholder,
              "index " + std::to_string(hit.index) + " appears more than once"};
    }
  }
  const bool exact = indices.size() == n &&
                     (n == 0 || (*indices.begin() == 0 && *indices.rbegin() == n - 1));
  if (!exact) {
    return {CountCheck::kPlaceholderCountMismatch,
            "expected " + std::to_string(n) + " placeholders, found " +
                std::to_string(hits.size())};
  }
  return {};
}

}  // namespace transproj
