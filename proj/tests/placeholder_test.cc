#include "transproj/placeholder.h"

#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "placeholder_cases.h"
#include "test_support.h"
#include "transproj/text.h"

using namespace transproj;
using transproj::testing::random_sentence;

namespace {

std::vector<std::uint64_t> indices_of(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (const PlaceholderHit& hit : find_placeholders(text)) out.push_back(hit.index);
  return out;
}

CodecError::Kind codec_error_kind(std::string_view tmpl, const std::vector<std::string>& entities,
                                  const std::vector<std::string>& labels) {
  try {
    unmask(tmpl, entities, labels);
  } catch (const CodecError& e) {
    return e.kind();
  }
  FAIL("expected CodecError");
  return CodecError::Kind::kEmptyResult;
}

// (label, surface) pairs of a sentence read straight off its tags.
std::multiset<std::pair<std::string, std::string>> entity_multiset(const TaggedSentence& s) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (const auto& [start, end, label] : transproj::testing::reference_spans(s.tags)) {
    std::vector<std::string> words(s.tokens.begin() + start, s.tokens.begin() + end);
    out.emplace(label, join(words, " "));
  }
  return out;
}

const std::vector<std::string> kLabels = {"PER", "LOC", "ORG", "MISC"};

}  // namespace

TEST_SUITE_BEGIN("placeholder");

TEST_CASE("canonical spelling") {
  CHECK(placeholder_for(0) == "[*0*]");
  CHECK(placeholder_for(17) == "[*17*]");
}

TEST_CASE("mask examples") {
  const MaskedSentence m = mask({{"John", "lives", "in", "Berlin"},
                                 {Tag::begin("PER"), Tag::outside(), Tag::outside(), Tag::begin("LOC")}});
  CHECK(m.text == "[*0*] lives in [*1*]");
  CHECK(m.surfaces() == std::vector<std::string>{"John", "Berlin"});
  CHECK(m.labels() == std::vector<std::string>{"PER", "LOC"});

  const MaskedSentence plain = mask({{"a", "b"}, {Tag::outside(), Tag::outside()}});
  CHECK(plain.text == "a b");
  CHECK(plain.entities.empty());

  const MaskedSentence whole =
      mask({{"New", "York"}, {Tag::begin("LOC"), Tag::inside("LOC")}});
  CHECK(whole.text == "[*0*]");
  CHECK(whole.surfaces() == std::vector<std::string>{"New York"});
}

TEST_CASE("mask reports pattern collisions") {
  const auto collides = [](TaggedSentence s) {
    try {
      mask(s);
    } catch (const CodecError& e) {
      return e.kind() == CodecError::Kind::kPatternCollision;
    }
    return false;
  };
  CHECK(collides({{"see", "[*0*]"}, {Tag::outside(), Tag::outside()}}));
  CHECK(collides({{"[*۳*]"}, {Tag::begin("PER")}}));
  // Harmless alone, a placeholder once joined with a space.
  CHECK(collides({{"[*", "0*]"}, {Tag::outside(), Tag::outside()}}));
  CHECK_FALSE(collides({{"[", "*", "]"}, {Tag::outside(), Tag::outside(), Tag::outside()}}));
  CHECK_THROWS_AS(mask({{"a"}, {Tag::inside("PER")}}), SpanError);
}

TEST_CASE("find_placeholders examples") {
  const auto hits = find_placeholders("[*0*] x [*1*]");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].index == 0);
  CHECK(hits[0].matched_text == "[*0*]");
  CHECK(hits[1].index == 1);
  CHECK(hits[1].char_begin == 8);
  CHECK(hits[1].char_end == 13);

  CHECK(find_placeholders("plain text").empty());

  const auto persian = find_placeholders("[* ۱ *]");
  REQUIRE(persian.size() == 1);
  CHECK(persian[0].index == 1);
  CHECK(persian[0].matched_text == "[* ۱ *]");
}

TEST_CASE("hit ranges count code points and bytes") {
  const std::string text = "سلام [*۰*]";
  const auto hits = find_placeholders(text);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].char_begin == 5);
  CHECK(hits[0].char_end == 10);
  CHECK(hits[0].byte_begin == 9);
  CHECK(hits[0].byte_end == text.size());
  CHECK(text.substr(hits[0].byte_begin, hits[0].byte_end - hits[0].byte_begin) ==
        hits[0].matched_text);
}

TEST_CASE("tolerant grammar table") {
  for (const auto& c : transproj::testing::positive_placeholder_cases()) {
    CAPTURE(c.text);
    CHECK(indices_of(c.text) == c.indices);
  }
  for (std::string_view text : transproj::testing::negative_placeholder_cases()) {
    CAPTURE(text);
    CHECK(find_placeholders(text).empty());
  }
}

TEST_CASE("unmask examples") {
  const TaggedSentence s = unmask("[*1*] x [*0*]", {"aa", "bb cc"}, {"PER", "LOC"});
  CHECK(s.tokens == std::vector<std::string>{"bb", "cc", "x", "aa"});
  CHECK(s.tags == std::vector<Tag>{Tag::begin("LOC"), Tag::inside("LOC"), Tag::outside(),
                                   Tag::begin("PER")});

  const TaggedSentence plain = unmask("a b", {}, {});
  CHECK(plain.tokens == std::vector<std::string>{"a", "b"});
  CHECK(plain.tags == std::vector<Tag>{Tag::outside(), Tag::outside()});
}

TEST_CASE("unmask separates placeholders glued to other text") {
  const TaggedSentence s = unmask("«[* ۰ *]»،", {"تهران"}, {"LOC"});
  CHECK(s.tokens == std::vector<std::string>{"«", "تهران", "»،"});
  CHECK(s.tags == std::vector<Tag>{Tag::outside(), Tag::begin("LOC"), Tag::outside()});
}

TEST_CASE("unmask errors") {
  CHECK(codec_error_kind("[*2*]", {"a", "b"}, {"X", "Y"}) == CodecError::Kind::kUnknownIndex);
  CHECK(codec_error_kind("[*0*] [*0*]", {"a"}, {"X"}) == CodecError::Kind::kDuplicateIndex);
  CHECK(codec_error_kind("[*0*] x", {" \t "}, {"X"}) == CodecError::Kind::kEmptyEntityTranslation);
  CHECK(codec_error_kind("  ", {}, {}) == CodecError::Kind::kEmptyResult);
  CHECK_THROWS_AS(unmask("x", {"a"}, {}), std::invalid_argument);
}

TEST_CASE("count_check examples") {
  const MaskedSentence two = mask({{"A", "and", "B"},
                                   {Tag::begin("PER"), Tag::outside(), Tag::begin("PER")}});
  CHECK(count_check(two, "[*1*] va [*0*]").ok());
  CHECK(count_check(two, "[*0*] va").status == CountCheck::kPlaceholderCountMismatch);
  CHECK(count_check(two, "[*0*] [*1*] [*2*]").status == CountCheck::kPlaceholderCountMismatch);

  const MaskedSentence one = mask({{"A"}, {Tag::begin("PER")}});
  CHECK(count_check(one, "[*0*] [*0*]").status == CountCheck::kDuplicatePlaceholder);
  CHECK(count_check(one, "[*1*]").status == CountCheck::kPlaceholderCountMismatch);

  const MaskedSentence none = mask({{"a"}, {Tag::outside()}});
  CHECK(count_check(none, "b").ok());
  CHECK(count_check(none, "b [*0*]").status == CountCheck::kPlaceholderCountMismatch);
}

TEST_CASE("codec properties on random sentences") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const TaggedSentence s = random_sentence(rng, 1, 12, 4, kLabels);
    const MaskedSentence m = mask(s);
    const std::size_t n = m.entities.size();
    CAPTURE(m.text);

    // The template carries 0..n-1 in order.
    std::vector<std::uint64_t> expected(n);
    for (std::size_t i = 0; i < n; ++i) expected[i] = i;
    REQUIRE(indices_of(m.text) == expected);
    CHECK(count_check(m, m.text).ok());

    // Identity round trip.
    const TaggedSentence back = unmask(m.text, m.surfaces(), m.labels());
    CHECK(back.tokens == s.tokens);
    CHECK(back.tags == s.tags);

    // Permuting words keeps each entity attached to its own index.
    std::vector<std::string> words = split_whitespace(m.text);
    std::shuffle(words.begin(), words.end(), rng);
    std::vector<std::string> translated(n);
    std::multiset<std::pair<std::string, std::string>> wanted;
    for (std::size_t i = 0; i < n; ++i) {
      translated[i] = "e" + std::to_string(i) + (rng() % 2 ? " w" + std::to_string(i) : "");
      wanted.emplace(m.entities[i].label, translated[i]);
    }
    const TaggedSentence permuted = unmask(join(words, " "), translated, m.labels());
    CHECK(entity_multiset(permuted) == wanted);
    CHECK(validate_scheme(permuted).empty());
    CHECK(static_cast<std::size_t>(std::count_if(
              permuted.tags.begin(), permuted.tags.end(),
              [](const Tag& t) { return t.kind() == Tag::Kind::kBegin; })) == n);
  }
}

TEST_SUITE_END();
