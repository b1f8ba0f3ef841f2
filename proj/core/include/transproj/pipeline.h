#pragma once

// Sentence and split level annotation projection.
//
// For every source sentence: check the tag scheme, extract entity spans, mask
// them with indexed placeholders, translate the template and the entity
// surfaces, check that the placeholders survived, reinsert the translated
// entities and check the result. The first failing stage turns the sentence
// into an exclusion with a machine-readable reason.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "transproj/backend.h"
#include "transproj/conll.h"

namespace transproj {

enum class ExclusionReason {
  kPatternCollision,
  kPlaceholderCountMismatch,
  kDuplicatePlaceholder,
  kEmptyEntityTranslation,
  kInvalidScheme,
  kTokenTagMismatch,
  kBackendFailure,
};

inline constexpr std::array kAllExclusionReasons = {
    ExclusionReason::kPatternCollision,       ExclusionReason::kPlaceholderCountMismatch,
    ExclusionReason::kDuplicatePlaceholder,   ExclusionReason::kEmptyEntityTranslation,
    ExclusionReason::kInvalidScheme,          ExclusionReason::kTokenTagMismatch,
    ExclusionReason::kBackendFailure,
};

// "pattern-collision", "placeholder-count-mismatch", ...
std::string_view reason_name(ExclusionReason reason);
std::optional<ExclusionReason> parse_reason(std::string_view name);

struct Exclusion {
  ExclusionReason reason;
  std::string detail;
};

struct ProjectionOutcome {
  std::size_t origin_index = 0;
  std::variant<TaggedSentence, Exclusion> result;

  bool projected() const { return std::holds_alternative<TaggedSentence>(result); }
  const TaggedSentence* sentence() const { return std::get_if<TaggedSentence>(&result); }
  const Exclusion* exclusion() const { return std::get_if<Exclusion>(&result); }
};

struct LanguagePair {
  std::string source;
  std::string target;
};

enum class FailurePolicy { kLenient, kStrict };

struct PipelineOptions {
  std::size_t parallelism = 1;
  std::size_t batch = 32;  // sentences whose texts share one backend call
  FailurePolicy on_backend_error = FailurePolicy::kLenient;
};

// Thrown under FailurePolicy::kStrict when the backend fails.
class AbortedRun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SplitReport {
  std::string split;
  std::size_t source_count = 0;
  std::size_t projected = 0;
  std::size_t excluded = 0;
  std::map<ExclusionReason, std::size_t> by_reason;
  std::size_t backend_calls = 0;
  std::size_t texts_requested = 0;  // after de-duplication
  double seconds = 0;
};

struct SplitProjection {
  DatasetSplit projected;  // projected sentences in origin_index order
  std::vector<ProjectionOutcome> outcomes;  // one per source sentence
  SplitReport report;
};

ProjectionOutcome project_sentence(const TaggedSentence& sentence, Backend& backend,
                                   const LanguagePair& langs,
                                   FailurePolicy policy = FailurePolicy::kLenient);

SplitProjection project_split(const DatasetSplit& split, Backend& backend,
                              const LanguagePair& langs,
                              const PipelineOptions& options = {});

struct RunReport {
  std::vector<SplitReport> splits;
  std::size_t dropped_empty = 0;  // empty blocks dropped while parsing input
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  std::size_t backend_calls = 0;
  double seconds = 0;
  std::vector<std::pair<std::string, std::string>> config;  // effective config

  std::map<ExclusionReason, std::size_t> totals() const;
};

std::string format_run_summary(const RunReport& report);
std::string run_report_json(const RunReport& report);

// One JSON line (without newline) for an excluded outcome.
std::string exclusion_record(const ProjectionOutcome& outcome, std::string_view split);

}  // namespace transproj
