#include "transproj/stats.h"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "transproj/text.h"

namespace transproj {
namespace {

using nlohmann::json;

enum class Align { kLeft, kRight };

std::string render_table(const std::vector<std::vector<std::string>>& rows,
                         const std::vector<Align>& align) {
  std::vector<std::size_t> width(align.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], display_width(row[c]));
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      const std::string pad(width[c] - display_width(row[c]), ' ');
      line += align[c] == Align::kLeft ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string count_cell(const std::optional<SplitStats>& s) {
  return s ? std::to_string(s->n_sentences) : "-";
}

std::string delta_cell(const std::optional<SplitStats>& source,
                       const std::optional<SplitStats>& target) {
  if (!source || !target) return "-";
  return std::to_string(delta_stats(*source, *target).n_sentences);
}

std::string labels_cell(const SplitStats& s) {
  std::string out;
  for (const auto& [label, count] : s.label_counts) {
    if (!out.empty()) out += ' ';
    out += label + ":" + std::to_string(count);
  }
  return out.empty() ? "-" : out;
}

json split_json(const SplitStats& s) {
  json j = {{"split", s.split_name},
            {"sentences", s.n_sentences},
            {"tokens", s.n_tokens},
            {"labels", s.label_counts}};
  if (s.avg_tokens) {
    j["avg_tokens"] = s.avg_tokens->fixed2();
    j["avg_tokens_rounded"] = s.avg_tokens->rounded();
  } else {
    j["avg_tokens"] = nullptr;
    j["avg_tokens_rounded"] = nullptr;
  }
  return j;
}

}  // namespace

std::int64_t Average::rounded() const {
  // Both operands are non-negative, so half-up is half-away-from-zero.
  return static_cast<std::int64_t>((2 * total + count) / (2 * count));
}

std::string Average::fixed2() const {
  const std::uint64_t hundredths = (200 * total + count) / (2 * count);
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(hundredths / 100) + "." + frac;
}

SplitStats split_stats(const DatasetSplit& split) {
  SplitStats s;
  s.split_name = split.name;
  s.n_sentences = split.sentences.size();
  for (const TaggedSentence& sentence : split.sentences) {
    s.n_tokens += sentence.tokens.size();
    for (const Tag& tag : normalize_iob1_to_iob2(sentence.tags)) {
      if (tag.kind() == Tag::Kind::kBegin) ++s.label_counts[tag.label()];
    }
  }
  if (s.n_sentences > 0) s.avg_tokens = Average{s.n_tokens, s.n_sentences};
  return s;
}

SplitStats combined_stats(const std::vector<SplitStats>& parts, std::string name) {
  SplitStats s;
  s.split_name = std::move(name);
  for (const SplitStats& part : parts) {
    s.n_sentences += part.n_sentences;
    s.n_tokens += part.n_tokens;
    for (const auto& [label, count] : part.label_counts) s.label_counts[label] += count;
  }
  if (s.n_sentences > 0) s.avg_tokens = Average{s.n_tokens, s.n_sentences};
  return s;
}

DeltaStats delta_stats(const SplitStats& source, const SplitStats& target) {
  DeltaStats d;
  d.split_name = source.split_name;
  d.n_sentences = static_cast<std::int64_t>(target.n_sentences) -
                  static_cast<std::int64_t>(source.n_sentences);
  if (source.avg_tokens && target.avg_tokens) {
    d.avg_tokens_rounded = target.avg_tokens->rounded() - source.avg_tokens->rounded();
  }
  return d;
}

SplitStats CorpusStats::overall() const {
  std::vector<SplitStats> parts;
  for (const auto* s : {&train, &dev, &test}) {
    if (*s) parts.push_back(**s);
  }
  return combined_stats(parts, "all");
}

std::string format_stats_table(const std::vector<CorpusStats>& corpora) {
  std::vector<std::vector<std::string>> rows = {{"dataset", "train", "dev", "test", "avg"}};
  const auto avg_cell = [](const SplitStats& s) {
    return s.avg_tokens ? std::to_string(s.avg_tokens->rounded()) : std::string("-");
  };
  for (const CorpusStats& c : corpora) {
    rows.push_back({c.name, count_cell(c.train), count_cell(c.dev), count_cell(c.test),
                    avg_cell(c.overall())});
  }
  if (!corpora.empty()) {
    const CorpusStats& source = corpora.front();
    for (std::size_t i = 1; i < corpora.size(); ++i) {
      const CorpusStats& target = corpora[i];
      const DeltaStats avg = delta_stats(source.overall(), target.overall());
      rows.push_back({"Δ " + target.name + "-" + source.name,
                      delta_cell(source.train, target.train),
                      delta_cell(source.dev, target.dev),
                      delta_cell(source.test, target.test),
                      avg.avg_tokens_rounded ? std::to_string(*avg.avg_tokens_rounded) : "-"});
    }
  }
  std::string out = render_table(
      rows, {Align::kLeft, Align::kRight, Align::kRight, Align::kRight, Align::kRight});

  std::vector<std::vector<std::string>> detail = {
      {"corpus", "split", "sentences", "tokens", "avg_tokens", "labels"}};
  for (const CorpusStats& c : corpora) {
    std::vector<SplitStats> present;
    for (const auto* s : {&c.train, &c.dev, &c.test}) {
      if (*s) present.push_back(**s);
    }
    present.push_back(c.overall());
    for (const SplitStats& s : present) {
      detail.push_back({c.name, s.split_name, std::to_string(s.n_sentences),
                        std::to_string(s.n_tokens),
                        s.avg_tokens ? s.avg_tokens->fixed2() : "-", labels_cell(s)});
    }
  }
  out += "\n";
  out += render_table(detail, {Align::kLeft, Align::kLeft, Align::kRight, Align::kRight,
                               Align::kRight, Align::kLeft});
  return out;
}

std::string stats_json(const std::vector<CorpusStats>& corpora) {
  json j = json::array();
  for (const CorpusStats& c : corpora) {
    json splits = json::array();
    for (const auto* s : {&c.train, &c.dev, &c.test}) {
      if (*s) splits.push_back(split_json(**s));
    }
    j.push_back({{"corpus", c.name}, {"splits", splits}, {"overall", split_json(c.overall())}});
  }
  json deltas = json::array();
  for (std::size_t i = 1; i < corpora.size(); ++i) {
    const CorpusStats& source = corpora.front();
    const CorpusStats& target = corpora[i];
    json d = {{"source", source.name}, {"target", target.name}};
    for (const auto& [name, src, tgt] :
         {std::tuple{"train", &source.train, &target.train},
          std::tuple{"dev", &source.dev, &target.dev},
          std::tuple{"test", &source.test, &target.test}}) {
      if (*src && *tgt) {
        d[name] = delta_stats(**src, **tgt).n_sentences;
      } else {
        d[name] = nullptr;
      }
    }
    const DeltaStats avg = delta_stats(source.overall(), target.overall());
    d["avg_tokens_rounded"] =
        avg.avg_tokens_rounded ? json(*avg.avg_tokens_rounded) : json(nullptr);
    deltas.push_back(d);
  }
  return json{{"corpora", j}, {"deltas", deltas}}.dump(2, ' ', false,
                                                       json::error_handler_t::replace) +
         "\n";
}

}  // namespace transproj
