#include "transproj/stats.h"

#include <algorithm>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "test_support.h"

using namespace transproj;

namespace {

// Sentences of the given lengths, all tagged O.
DatasetSplit split_with_lengths(const std::string& name, const std::vector<std::size_t>& lengths) {
  DatasetSplit split{name, {}};
  for (std::size_t len : lengths) {
    TaggedSentence s;
    s.tokens.assign(len, "w");
    s.tags.assign(len, Tag::outside());
    s.origin_index = split.sentences.size();
    split.sentences.push_back(std::move(s));
  }
  return split;
}

}  // namespace

TEST_SUITE_BEGIN("stats");

TEST_CASE("average rounding is half away from zero") {
  CHECK(Average{19, 2}.rounded() == 10);
  CHECK(Average{19, 2}.fixed2() == "9.50");
  CHECK(Average{5, 2}.rounded() == 3);
  CHECK(Average{7, 3}.rounded() == 2);
  CHECK(Average{22, 3}.fixed2() == "7.33");
  CHECK(Average{1, 8}.fixed2() == "0.13");
  CHECK(Average{3, 8}.fixed2() == "0.38");
  CHECK(Average{61, 10}.fixed2() == "6.10");
  CHECK(Average{119, 18}.fixed2() == "6.61");
}

TEST_CASE("split_stats examples") {
  const SplitStats s = split_stats(split_with_lengths("train", {3, 5}));
  CHECK(s.n_sentences == 2);
  CHECK(s.n_tokens == 8);
  REQUIRE(s.avg_tokens.has_value());
  CHECK(s.avg_tokens->fixed2() == "4.00");
  CHECK(s.avg_tokens->rounded() == 4);

  const SplitStats empty = split_stats(DatasetSplit{"dev", {}});
  CHECK(empty.n_sentences == 0);
  CHECK_FALSE(empty.avg_tokens.has_value());
}

TEST_CASE("delta_stats examples") {
  const SplitStats a = split_stats(split_with_lengths("train", {3, 5}));
  const DeltaStats same = delta_stats(a, a);
  CHECK(same.n_sentences == 0);
  CHECK(same.avg_tokens_rounded == 0);

  // 5 sentences averaging 10.00 against 4 averaging 9.50.
  const SplitStats source = split_stats(split_with_lengths("test", {10, 10, 10, 10, 10}));
  const SplitStats target = split_stats(split_with_lengths("test", {9, 10, 9, 10}));
  const DeltaStats d = delta_stats(source, target);
  CHECK(d.n_sentences == -1);
  CHECK(d.avg_tokens_rounded == 0);

  const DeltaStats to_empty = delta_stats(source, split_stats(DatasetSplit{"test", {}}));
  CHECK(to_empty.n_sentences == -5);
  CHECK_FALSE(to_empty.avg_tokens_rounded.has_value());
}

TEST_CASE("label counts and invariance under reordering") {
  std::mt19937_64 rng(3);
  DatasetSplit split{"train", {}};
  std::size_t b_tags = 0;
  for (int i = 0; i < 200; ++i) {
    split.sentences.push_back(transproj::testing::random_sentence(rng, 1, 12, 4, {"A", "B", "C"}));
    for (const Tag& t : split.sentences.back().tags) b_tags += t.kind() == Tag::Kind::kBegin;
  }
  const SplitStats s = split_stats(split);
  std::size_t total = 0;
  for (const auto& [label, n] : s.label_counts) total += n;
  CHECK(total == b_tags);

  DatasetSplit shuffled = split;
  std::shuffle(shuffled.sentences.begin(), shuffled.sentences.end(), rng);
  const SplitStats t = split_stats(shuffled);
  CHECK(t.n_sentences == s.n_sentences);
  CHECK(t.n_tokens == s.n_tokens);
  CHECK(t.avg_tokens == s.avg_tokens);
  CHECK(t.label_counts == s.label_counts);
}

TEST_CASE("IOB1 input counts entities as IOB1") {
  DatasetSplit split{"x", {{{"a", "b", "c"}, {Tag::inside("PER"), Tag::inside("PER"), Tag::begin("PER")}, 0}}};
  CHECK(split_stats(split).label_counts.at("PER") == 2);
}

TEST_CASE("combined stats pool tokens exactly") {
  const SplitStats a = split_stats(split_with_lengths("train", {1, 2}));
  const SplitStats b = split_stats(split_with_lengths("dev", {4}));
  const SplitStats all = combined_stats({a, b}, "all");
  CHECK(all.split_name == "all");
  CHECK(all.n_sentences == 3);
  CHECK(all.avg_tokens == Average{7, 3});
}

TEST_CASE("table layout") {
  CorpusStats en{"en", split_stats(split_with_lengths("train", {2, 2})),
                 split_stats(split_with_lengths("dev", {3})), std::nullopt};
  CorpusStats fa{"fa", split_stats(split_with_lengths("train", {3})),
                 split_stats(split_with_lengths("dev", {3})), std::nullopt};
  const std::string table = format_stats_table({en, fa});
  CHECK(table.rfind("dataset  train  dev  test  avg\n", 0) == 0);
  CHECK(table.find("Δ fa-en") != std::string::npos);
  CHECK(table.find(" \n") == std::string::npos);

  const auto json = nlohmann::json::parse(stats_json({en, fa}));
  CHECK(json.is_object());
}

TEST_SUITE_END();
