#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "transproj/conll.h"
#include "transproj/pipeline.h"
#include "transproj/placeholder.h"

namespace {

using namespace transproj;

// Sentences of |length| tokens with an entity every fourth token.
DatasetSplit synthetic_split(std::size_t sentences, std::size_t length) {
  static const char* const kLabels[] = {"PER", "LOC", "ORG"};
  std::mt19937_64 rng(1);
  DatasetSplit split{"train", {}};
  for (std::size_t s = 0; s < sentences; ++s) {
    TaggedSentence sentence;
    for (std::size_t i = 0; i < length; ++i) {
      sentence.tokens.push_back("w" + std::to_string(rng() % 5000));
      if (i % 4 == 0) {
        sentence.tags.push_back(Tag::begin(kLabels[rng() % 3]));
      } else if (i % 4 == 1) {
        sentence.tags.push_back(Tag::inside(sentence.tags.back().label()));
      } else {
        sentence.tags.push_back(Tag::outside());
      }
    }
    sentence.origin_index = s;
    split.sentences.push_back(std::move(sentence));
  }
  return split;
}

void BM_MaskUnmask(benchmark::State& state) {
  const DatasetSplit split = synthetic_split(1, static_cast<std::size_t>(state.range(0)));
  const TaggedSentence& sentence = split.sentences.front();
  for (auto _ : state) {
    const MaskedSentence masked = mask(sentence);
    benchmark::DoNotOptimize(unmask(masked.text, masked.surfaces(), masked.labels()));
  }
}
BENCHMARK(BM_MaskUnmask)->Arg(8)->Arg(32)->Arg(128);

void BM_FindPlaceholders(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "word [* " + std::to_string(i) + " *] ";
  for (auto _ : state) benchmark::DoNotOptimize(find_placeholders(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_FindPlaceholders)->Arg(4)->Arg(64);

void BM_ParseConll(benchmark::State& state) {
  const std::string text = serialize_conll(synthetic_split(static_cast<std::size_t>(state.range(0)), 15));
  for (auto _ : state) benchmark::DoNotOptimize(parse_conll(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseConll)->Arg(1000);

void BM_ProjectIdentity(benchmark::State& state) {
  const DatasetSplit split = synthetic_split(static_cast<std::size_t>(state.range(0)), 15);
  IdentityBackend identity;
  PipelineOptions options;
  options.parallelism = 4;
  for (auto _ : state) benchmark::DoNotOptimize(project_split(split, identity, {"en", "fa"}, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProjectIdentity)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
