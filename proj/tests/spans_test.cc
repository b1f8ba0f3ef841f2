#include "transproj/spans.h"

#include "doctest.h"
#include "test_support.h"

using namespace transproj;
using transproj::testing::all_tag_sequences;
using transproj::testing::reference_spans;
using transproj::testing::render;

namespace {

TaggedSentence sentence_with(std::vector<Tag> tags) {
  TaggedSentence s;
  for (std::size_t i = 0; i < tags.size(); ++i) s.tokens.push_back("t" + std::to_string(i));
  s.tags = std::move(tags);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("spans");

TEST_CASE("extract_spans examples") {
  TaggedSentence s{{"John", "lives", "in", "Berlin"},
                   {Tag::begin("PER"), Tag::outside(), Tag::outside(), Tag::begin("LOC")}};
  const auto spans = extract_spans(s);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == EntitySpan{0, 1, "PER", "John"});
  CHECK(spans[1] == EntitySpan{3, 4, "LOC", "Berlin"});

  CHECK(extract_spans(TaggedSentence{{"a", "b"}, {Tag::outside(), Tag::outside()}}).empty());

  const auto orgs = extract_spans(sentence_with({Tag::begin("ORG"), Tag::inside("ORG"), Tag::begin("ORG")}));
  REQUIRE(orgs.size() == 2);
  CHECK(orgs[0].start == 0);
  CHECK(orgs[0].end == 2);
  CHECK(orgs[0].surface == "t0 t1");
  CHECK(orgs[1].start == 2);
  CHECK(orgs[1].end == 3);
}

TEST_CASE("extract_spans rejects invalid IOB2") {
  try {
    extract_spans(sentence_with({Tag::outside(), Tag::inside("LOC")}));
    FAIL("expected SpanError");
  } catch (const SpanError& e) {
    CHECK(e.kind() == SpanError::Kind::kInvalidScheme);
  }
}

TEST_CASE("spans_to_tags examples") {
  CHECK(spans_to_tags({}, 3) == std::vector<Tag>(3, Tag::outside()));
  CHECK(spans_to_tags({{0, 2, "PER", ""}}, 2) ==
        std::vector<Tag>{Tag::begin("PER"), Tag::inside("PER")});
  CHECK(spans_to_tags({{2, 4, "ORG", ""}, {1, 2, "LOC", ""}}, 4) ==
        std::vector<Tag>{Tag::outside(), Tag::begin("LOC"), Tag::begin("ORG"), Tag::inside("ORG")});
}

TEST_CASE("spans_to_tags errors") {
  const auto kind_of = [](const std::vector<EntitySpan>& spans, std::size_t length) {
    try {
      spans_to_tags(spans, length);
    } catch (const SpanError& e) {
      return e.kind();
    }
    FAIL("expected SpanError");
    return SpanError::Kind::kInvalidScheme;
  };
  CHECK(kind_of({{0, 2, "A", ""}, {1, 3, "B", ""}}, 3) == SpanError::Kind::kOverlappingSpans);
  CHECK(kind_of({{2, 4, "A", ""}}, 3) == SpanError::Kind::kSpanOutOfRange);
  CHECK(kind_of({{1, 1, "A", ""}}, 3) == SpanError::Kind::kSpanOutOfRange);
}

TEST_CASE("exhaustive round trip up to length 5") {
  const std::vector<std::string> labels = {"A", "B"};
  for (std::size_t length = 0; length <= 5; ++length) {
    for (const auto& tags : all_tag_sequences(length, labels)) {
      if (!validate_scheme(tags).empty()) continue;
      const auto spans = extract_spans(sentence_with(tags));
      CAPTURE(render(tags));
      CHECK(spans_to_tags(spans, length) == tags);
      // Independent decoder agrees on the span set.
      const auto expected = reference_spans(tags);
      REQUIRE(spans.size() == expected.size());
      for (std::size_t i = 0; i < spans.size(); ++i) {
        CHECK(std::get<0>(expected[i]) == spans[i].start);
        CHECK(std::get<1>(expected[i]) == spans[i].end);
        CHECK(std::get<2>(expected[i]) == spans[i].label);
      }
    }
  }
}

TEST_CASE("span count is invariant under IOB1 normalization") {
  const std::vector<std::string> labels = {"A", "B"};
  for (const auto& tags : all_tag_sequences(4, labels)) {
    if (!validate_scheme(tags).empty()) continue;
    CHECK(extract_spans(sentence_with(normalize_iob1_to_iob2(tags))).size() ==
          extract_spans(sentence_with(tags)).size());
  }
}

TEST_SUITE_END();
