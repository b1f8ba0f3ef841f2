#include "transproj/spans.h"

#include <algorithm>

#include "transproj/text.h"

namespace transproj {

std::vector<EntitySpan> extract_spans(const TaggedSentence& sentence) {
  const std::vector<Violation> violations = validate_scheme(sentence);
  if (!violations.empty()) {
    throw SpanError(SpanError::Kind::kInvalidScheme,
                    "invalid IOB2 at token " +
                        std::to_string(violations.front().index) + ": " +
                        violations.front().message);
  }

  std::vector<EntitySpan> spans;
  const std::vector<Tag>& tags = sentence.tags;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i].kind() != Tag::Kind::kBegin) {
      ++i;
      continue;
    }
    EntitySpan span;
    span.start = i;
    span.label = tags[i].label();
    ++i;
    while (i < tags.size() && tags[i].kind() == Tag::Kind::kInside) ++i;
    span.end = i;
    span.surface = join({sentence.tokens.begin() + span.start,
                         sentence.tokens.begin() + span.end},
                        " ");
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<Tag> spans_to_tags(const std::vector<EntitySpan>& spans,
                               std::size_t length) {
  std::vector<const EntitySpan*> ordered;
  ordered.reserve(spans.size());
  for (const EntitySpan& span : spans) {
    if (span.start >= span.end || span.end > length) {
      throw SpanError(SpanError::Kind::kSpanOutOfRange,
                      "span [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") outside [0, " +
                          std::to_string(length) + ")");
    }
    if (span.label.empty()) {
      throw SpanError(SpanError::Kind::kSpanOutOfRange, "span without label");
    }
    ordered.push_back(&span);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const EntitySpan* a, const EntitySpan* b) {
              return a->start < b->start;
            });
  for (std::size_t k = 1; k < ordered.size(); ++k) {
    if (ordered[k]->start < ordered[k - 1]->end) {
      throw SpanError(SpanError::Kind::kOverlappingSpans,
                      "spans starting at " +
                          std::to_string(ordered[k - 1]->start) + " and " +
                          std::to_string(ordered[k]->start) + " overlap");
    }
  }

  std::vector<Tag> tags(length);
  for (const EntitySpan* span : ordered) {
    tags[span->start] = Tag::begin(span->label);
    for (std::size_t i = span->start + 1; i < span->end; ++i) {
      tags[i] = Tag::inside(span->label);
    }
  }
  return tags;
}

}  // namespace transproj
