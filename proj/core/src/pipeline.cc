#include "transproj/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "transproj/placeholder.h"
#include "transproj/spans.h"

namespace transproj {
namespace {

using nlohmann::json;

// A sentence that survived masking and waits for its translations.
struct PendingSentence {
  std::size_t slot = 0;  // position in the outcome list
  MaskedSentence masked;
  std::vector<std::size_t> text_ids;  // template first, then entities
};

ExclusionReason reason_for(CodecError::Kind kind) {
  switch (kind) {
    case CodecError::Kind::kPatternCollision:
      return ExclusionReason::kPatternCollision;
    case CodecError::Kind::kUnknownIndex:
      return ExclusionReason::kPlaceholderCountMismatch;
    case CodecError::Kind::kDuplicateIndex:
      return ExclusionReason::kDuplicatePlaceholder;
    case CodecError::Kind::kEmptyEntityTranslation:
      return ExclusionReason::kEmptyEntityTranslation;
    case CodecError::Kind::kEmptyResult:
      return ExclusionReason::kTokenTagMismatch;
  }
  return ExclusionReason::kTokenTagMismatch;
}

// Masking stage. Returns an exclusion or fills |masked|.
std::optional<Exclusion> prepare(const TaggedSentence& sentence, MaskedSentence* masked) {
  if (sentence.tokens.empty() || sentence.tokens.size() != sentence.tags.size()) {
    return Exclusion{ExclusionReason::kTokenTagMismatch,
                     std::to_string(sentence.tokens.size()) + " tokens, " +
                         std::to_string(sentence.tags.size()) + " tags"};
  }
  if (auto violations = validate_scheme(sentence); !violations.empty()) {
    return Exclusion{ExclusionReason::kInvalidScheme,
                     "token " + std::to_string(violations.front().index) + ": " +
                         violations.front().message};
  }
  try {
    *masked = mask(sentence);
  } catch (const CodecError& e) {
    return Exclusion{reason_for(e.kind()), e.what()};
  } catch (const SpanError& e) {
    return Exclusion{ExclusionReason::kInvalidScheme, e.what()};
  }
  return std::nullopt;
}

// Check, reinsert and verify one translated sentence.
std::variant<TaggedSentence, Exclusion> finish(const MaskedSentence& masked,
                                               const std::string& translated_template,
                                               const std::vector<std::string>& translated_entities) {
  const CountCheckResult check = count_check(masked, translated_template);
  if (!check.ok()) {
    const ExclusionReason reason = check.status == CountCheck::kDuplicatePlaceholder
                                       ? ExclusionReason::kDuplicatePlaceholder
                                       : ExclusionReason::kPlaceholderCountMismatch;
    return Exclusion{reason, check.detail};
  }
  TaggedSentence out;
  try {
    out = unmask(translated_template, translated_entities, masked.labels());
  } catch (const CodecError& e) {
    return Exclusion{reason_for(e.kind()), e.what()};
  }
  if (out.tokens.empty() || out.tokens.size() != out.tags.size() ||
      !validate_scheme(out).empty()) {
    return Exclusion{ExclusionReason::kTokenTagMismatch,
                     "inconsistent tokens and tags after reinsertion"};
  }
  return out;
}

std::string fixed2(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << value;
  return os.str();
}

}  // namespace

std::string_view reason_name(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kPatternCollision:
      return "pattern-collision";
    case ExclusionReason::kPlaceholderCountMismatch:
      return "placeholder-count-mismatch";
    case ExclusionReason::kDuplicatePlaceholder:
      return "duplicate-placeholder";
    case ExclusionReason::kEmptyEntityTranslation:
      return "empty-entity-translation";
    case ExclusionReason::kInvalidScheme:
      return "invalid-scheme";
    case ExclusionReason::kTokenTagMismatch:
      return "token-tag-mismatch";
    case ExclusionReason::kBackendFailure:
      return "backend-failure";
  }
  return "unknown";
}

std::optional<ExclusionReason> parse_reason(std::string_view name) {
  for (const ExclusionReason reason : kAllExclusionReasons) {
    if (reason_name(reason) == name) return reason;
  }
  return std::nullopt;
}

SplitProjection project_split(const DatasetSplit& split, Backend& backend,
                              const LanguagePair& langs, const PipelineOptions& options) {
  if (options.parallelism == 0) throw std::invalid_argument("parallelism must be >= 1");
  if (options.batch == 0) throw std::invalid_argument("batch must be >= 1");
  const auto started = std::chrono::steady_clock::now();

  SplitProjection result;
  result.projected.name = split.name;
  result.report.split = split.name;
  result.report.source_count = split.sentences.size();
  result.outcomes.resize(split.sentences.size());

  // Mask everything and intern the texts to translate. Each distinct text is
  // requested once, in the batch of the first sentence that needs it.
  std::vector<PendingSentence> pending;
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> text_ids;
  std::vector<std::vector<std::size_t>> batches;  // text ids per backend call

  const auto intern = [&](const std::string& text) {
    auto [it, inserted] = text_ids.emplace(text, texts.size());
    if (inserted) {
      texts.push_back(text);
      batches.back().push_back(it->second);
    }
    return it->second;
  };

  for (std::size_t k = 0; k < split.sentences.size(); ++k) {
    const TaggedSentence& sentence = split.sentences[k];
    result.outcomes[k].origin_index = sentence.origin_index;
    PendingSentence p;
    p.slot = k;
    if (auto excluded = prepare(sentence, &p.masked)) {
      result.outcomes[k].result = std::move(*excluded);
      continue;
    }
    if (pending.size() % options.batch == 0) batches.emplace_back();
    p.text_ids.push_back(intern(p.masked.text));
    for (const EntitySpan& entity : p.masked.entities) {
      p.text_ids.push_back(intern(entity.surface));
    }
    pending.push_back(std::move(p));
  }
  std::erase_if(batches, [](const auto& b) { return b.empty(); });

  // Translate batches concurrently; results land in fixed slots so the order
  // of completion does not matter.
  std::vector<std::string> translations(texts.size());
  std::vector<std::optional<std::string>> batch_error(batches.size());
  std::atomic<std::size_t> next_batch{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  const auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t b = next_batch.fetch_add(1);
      if (b >= batches.size()) return;
      TranslationRequest request{{}, langs.source, langs.target};
      request.texts.reserve(batches[b].size());
      for (const std::size_t id : batches[b]) request.texts.push_back(texts[id]);
      try {
        std::vector<std::string> out = translate_batch(request, backend);
        for (std::size_t i = 0; i < out.size(); ++i) {
          translations[batches[b][i]] = std::move(out[i]);
        }
      } catch (const BackendError& e) {
        batch_error[b] = e.what();
        if (options.on_backend_error == FailurePolicy::kStrict) abort.store(true);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
      }
    }
  };

  const std::size_t workers = std::min(options.parallelism, batches.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);
  result.report.backend_calls = batches.size();
  result.report.texts_requested = texts.size();

  std::vector<std::optional<std::string>> text_error(texts.size());
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (!batch_error[b]) continue;
    if (options.on_backend_error == FailurePolicy::kStrict) {
      throw AbortedRun("backend failure in split '" + split.name + "': " + *batch_error[b]);
    }
    for (const std::size_t id : batches[b]) text_error[id] = batch_error[b];
  }

  for (const PendingSentence& p : pending) {
    ProjectionOutcome& outcome = result.outcomes[p.slot];
    std::optional<std::string> failure;
    for (const std::size_t id : p.text_ids) {
      if (text_error[id]) {
        failure = text_error[id];
        break;
      }
    }
    if (failure) {
      outcome.result = Exclusion{ExclusionReason::kBackendFailure, *failure};
      continue;
    }
    std::vector<std::string> entities;
    entities.reserve(p.text_ids.size() - 1);
    for (std::size_t i = 1; i < p.text_ids.size(); ++i) {
      entities.push_back(translations[p.text_ids[i]]);
    }
    outcome.result = finish(p.masked, translations[p.text_ids.front()], entities);
    if (TaggedSentence* s = std::get_if<TaggedSentence>(&outcome.result)) {
      s->origin_index = outcome.origin_index;
    }
  }

  for (const ProjectionOutcome& outcome : result.outcomes) {
    if (const TaggedSentence* s = outcome.sentence()) {
      result.projected.sentences.push_back(*s);
      ++result.report.projected;
    } else {
      ++result.report.excluded;
      ++result.report.by_reason[outcome.exclusion()->reason];
    }
  }
  result.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ProjectionOutcome project_sentence(const TaggedSentence& sentence, Backend& backend,
                                   const LanguagePair& langs, FailurePolicy policy) {
  DatasetSplit single{"sentence", {sentence}};
  PipelineOptions options;
  options.on_backend_error = policy;
  return std::move(project_split(single, backend, langs, options).outcomes.front());
}

std::map<ExclusionReason, std::size_t> RunReport::totals() const {
  std::map<ExclusionReason, std::size_t> out;
  for (const SplitReport& split : splits) {
    for (const auto& [reason, count] : split.by_reason) out[reason] += count;
  }
  return out;
}

std::string format_run_summary(const RunReport& report) {
  std::ostringstream os;
  os << "effective config:\n";
  for (const auto& [key, value] : report.config) os << "  " << key << " = " << value << "\n";
  os << "splits:\n";
  for (const SplitReport& s : report.splits) {
    const long long delta = static_cast<long long>(s.projected) -
                            static_cast<long long>(s.source_count);
    os << "  " << s.split << ": source " << s.source_count << ", projected " << s.projected
       << ", excluded " << s.excluded << ", delta " << delta << "\n";
  }
  os << "exclusions by reason:\n";
  const auto totals = report.totals();
  for (const ExclusionReason reason : kAllExclusionReasons) {
    auto it = totals.find(reason);
    os << "  " << reason_name(reason) << ": " << (it == totals.end() ? 0 : it->second) << "\n";
  }
  os << "empty blocks dropped: " << report.dropped_empty << "\n";
  os << "backend calls: " << report.backend_calls << ", cache hits: " << report.cache_hits
     << ", cache misses: " << report.cache_misses << "\n";
  os << "wall time: " << fixed2(report.seconds) << " s\n";
  return os.str();
}

std::string run_report_json(const RunReport& report) {
  json j;
  json config = json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  j["config"] = config;
  json splits = json::array();
  for (const SplitReport& s : report.splits) {
    json reasons = json::object();
    for (const auto& [reason, count] : s.by_reason) reasons[std::string(reason_name(reason))] = count;
    splits.push_back({{"split", s.split},
                      {"source", s.source_count},
                      {"projected", s.projected},
                      {"excluded", s.excluded},
                      {"delta", static_cast<long long>(s.projected) -
                                    static_cast<long long>(s.source_count)},
                      {"by_reason", reasons},
                      {"backend_calls", s.backend_calls},
                      {"texts_requested", s.texts_requested},
                      {"seconds", s.seconds}});
  }
  j["splits"] = splits;
  json totals = json::object();
  for (const auto& [reason, count] : report.totals()) totals[std::string(reason_name(reason))] = count;
  j["exclusions"] = totals;
  j["dropped_empty"] = report.dropped_empty;
  j["cache_hits"] = report.cache_hits;
  j["cache_misses"] = report.cache_misses;
  j["backend_calls"] = report.backend_calls;
  j["seconds"] = report.seconds;
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string exclusion_record(const ProjectionOutcome& outcome, std::string_view split) {
  const Exclusion* exclusion = outcome.exclusion();
  if (exclusion == nullptr) throw std::invalid_argument("outcome is not an exclusion");
  json j = {{"origin_index", outcome.origin_index},
            {"split", std::string(split)},
            {"reason", std::string(reason_name(exclusion->reason))}};
  if (!exclusion->detail.empty()) j["detail"] = exclusion->detail;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace transproj
