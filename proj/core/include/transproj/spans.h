#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "transproj/conll.h"

namespace transproj {

// Half-open token range [start, end) carrying one entity label.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  std::string surface;  // source tokens of the span joined by single spaces

  std::size_t length() const { return end - start; }
  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

class SpanError : public std::runtime_error {
 public:
  enum class Kind { kInvalidScheme, kOverlappingSpans, kSpanOutOfRange };

  SpanError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// One span per maximal B-X I-X* run, sorted by start. Throws
// SpanError::kInvalidScheme unless the tags are valid IOB2.
std::vector<EntitySpan> extract_spans(const TaggedSentence& sentence);

// Inverse of extract_spans. Spans may be given in any order but must be
// non-empty, disjoint and inside [0, length).
std::vector<Tag> spans_to_tags(const std::vector<EntitySpan>& spans,
                               std::size_t length);

}  // namespace transproj
