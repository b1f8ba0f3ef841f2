#pragma once

// Placeholder masking of entity spans.
//
// Before translation every entity span of a sentence is replaced by the
// literal "[*i*]" where i is the 0-based position of the entity in order of
// appearance. The masked template and the entity surfaces are translated
// separately; afterwards each translated entity is put back wherever the
// placeholder carrying its index ended up, so entity reordering by the
// translation engine is harmless.
//
// Engines mangle bracketed tokens, so detection accepts whitespace around
// each component and Arabic-Indic / Extended Arabic-Indic digits:
//
//   "[" ws* "*" ws* digit+ ws* "*" ws* "]"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "transproj/conll.h"
#include "transproj/spans.h"

namespace transproj {

struct MaskedSentence {
  std::string text;                  // template with "[*i*]" per entity
  std::vector<EntitySpan> entities;  // entity i fills placeholder i

  std::vector<std::string> surfaces() const;
  std::vector<std::string> labels() const;
};

struct PlaceholderHit {
  // Indices too large for 64 bits saturate to UINT64_MAX.
  std::uint64_t index = 0;
  std::size_t char_begin = 0;  // code-point range in the scanned text
  std::size_t char_end = 0;
  std::size_t byte_begin = 0;  // same range in bytes
  std::size_t byte_end = 0;
  std::string matched_text;

  friend bool operator==(const PlaceholderHit&, const PlaceholderHit&) = default;
};

class CodecError : public std::runtime_error {
 public:
  enum class Kind {
    kPatternCollision,
    kUnknownIndex,
    kDuplicateIndex,
    kEmptyEntityTranslation,
    kEmptyResult,
  };

  CodecError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The canonical placeholder, e.g. placeholder_for(3) == "[*3*]".
std::string placeholder_for(std::size_t index);

// Throws SpanError for invalid IOB2 and CodecError::kPatternCollision when
// source text already contains something the scanner would read as a
// placeholder.
MaskedSentence mask(const TaggedSentence& sentence);

std::vector<PlaceholderHit> find_placeholders(std::string_view text);

// Rebuilds a tagged sentence from a translated template. Text between
// placeholders and each translated entity are split on whitespace; entity i
// is tagged B-labels[i] I-labels[i]... wherever placeholder i appears.
TaggedSentence unmask(std::string_view translated_template,
                      const std::vector<std::string>& translated_entities,
                      const std::vector<std::string>& labels);

enum class CountCheck {
  kPass,
  kPlaceholderCountMismatch,
  kDuplicatePlaceholder,
};

struct CountCheckResult {
  CountCheck status = CountCheck::kPass;
  std::string detail;

  bool ok() const { return status == CountCheck::kPass; }
};

// Passes iff the translated template carries each index 0..n-1 exactly once.
CountCheckResult count_check(const MaskedSentence& masked,
                             std::string_view translated_template);

}  // namespace transproj
