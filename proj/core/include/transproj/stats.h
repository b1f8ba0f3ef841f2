#pragma once

// Corpus statistics in the layout of a source-vs-translated instance table:
// sentence counts per split, mean tokens per sentence, and target-minus-source
// deltas.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "transproj/conll.h"

namespace transproj {

// total_tokens / sentences kept as an exact ratio.
struct Average {
  std::uint64_t total = 0;
  std::uint64_t count = 0;  // > 0

  // Rounded half away from zero.
  std::int64_t rounded() const;
  // Two decimals, rounded half away from zero, e.g. "9.50".
  std::string fixed2() const;
  double value() const { return static_cast<double>(total) / static_cast<double>(count); }

  friend bool operator==(const Average&, const Average&) = default;
};

struct SplitStats {
  std::string split_name;
  std::size_t n_sentences = 0;
  std::uint64_t n_tokens = 0;
  std::optional<Average> avg_tokens;  // absent for an empty split
  std::map<std::string, std::size_t> label_counts;
};

struct DeltaStats {
  std::string split_name;
  std::int64_t n_sentences = 0;
  std::optional<std::int64_t> avg_tokens_rounded;  // absent if either side has no avg
};

// Entity counts come from the IOB2 reading of the tags (IOB1 input is read as
// IOB1, which is the same thing for valid IOB2).
SplitStats split_stats(const DatasetSplit& split);

// Pools several splits, e.g. for the overall average of a corpus.
SplitStats combined_stats(const std::vector<SplitStats>& parts, std::string name);

DeltaStats delta_stats(const SplitStats& source, const SplitStats& target);

// A named corpus with up to three standard splits.
struct CorpusStats {
  std::string name;
  std::optional<SplitStats> train;
  std::optional<SplitStats> dev;
  std::optional<SplitStats> test;

  SplitStats overall() const;
};

// Aligned plain-text table: one row per corpus (train, dev, test sentence
// counts and rounded overall average) and, for every corpus after the first,
// a delta row against the first. A per-split detail section follows.
std::string format_stats_table(const std::vector<CorpusStats>& corpora);

// Structured (JSON) form of the same numbers.
std::string stats_json(const std::vector<CorpusStats>& corpora);

}  // namespace transproj
