#include "cli.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "transproj/cache.h"
#include "transproj/conll.h"
#include "transproj/pipeline.h"
#include "transproj/stats.h"

namespace transproj::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSplitNames[] = {"train", "dev", "test"};

struct TranslateConfig {
  std::string input_train;
  std::string input_dev;
  std::string input_test;
  std::string out;
  std::string src = "en";
  std::string tgt = "fa";
  std::string backend = "identity";
  std::string cache;
  std::size_t batch = 32;
  std::size_t parallel = 1;
  std::string on_backend_error = "lenient";
  std::string profile = "generic";
  std::string normalize_iob1 = "auto";
  std::string report;
  double rate = 5.0;
  std::size_t in_flight = 4;
};

// Error carrying the exit code it maps to.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIoError, "cannot read " + path.string()};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Failure{kIoError, "cannot write " + path.string()};
}

DatasetSplit load_split(const fs::path& path, const std::string& name,
                        ParseStats* stats = nullptr) {
  const std::string text = read_file(path);
  try {
    return parse_conll(text, name, stats);
  } catch (const ConllError& e) {
    throw Failure{kParseError, path.string() + ": " + e.what()};
  }
}

bool normalization_enabled(const TranslateConfig& cfg) {
  if (cfg.normalize_iob1 == "on") return true;
  if (cfg.normalize_iob1 == "off") return false;
  return cfg.profile == "conll2003";
}

std::string format_number(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::vector<std::pair<std::string, std::string>> effective_config(const TranslateConfig& cfg) {
  return {
      {"input-train", cfg.input_train},
      {"input-dev", cfg.input_dev},
      {"input-test", cfg.input_test},
      {"out", cfg.out},
      {"src", cfg.src},
      {"tgt", cfg.tgt},
      {"backend", cfg.backend},
      {"cache", cfg.cache},
      {"batch", std::to_string(cfg.batch)},
      {"parallel", std::to_string(cfg.parallel)},
      {"on-backend-error", cfg.on_backend_error},
      {"profile", cfg.profile},
      {"normalize-iob1", normalization_enabled(cfg) ? "on" : "off"},
      {"rate", format_number(cfg.rate)},
      {"in-flight", std::to_string(cfg.in_flight)},
  };
}

void check_config(const TranslateConfig& cfg) {
  if (cfg.input_train.empty() && cfg.input_dev.empty() && cfg.input_test.empty()) {
    throw Failure{kConfigError, "no input split given (--input-train/--input-dev/--input-test)"};
  }
  for (const std::string* input : {&cfg.input_train, &cfg.input_dev, &cfg.input_test}) {
    if (!input->empty() && !fs::is_regular_file(*input)) {
      throw Failure{kConfigError, "input file not found: " + *input};
    }
  }
  if (cfg.out.empty()) throw Failure{kConfigError, "--out is required"};
  if (cfg.src.empty() || cfg.tgt.empty()) {
    throw Failure{kConfigError, "language codes must be non-empty"};
  }
  if (cfg.src == cfg.tgt) {
    throw Failure{kConfigError, "source and target language are both '" + cfg.src + "'"};
  }
  if (cfg.batch < 1) throw Failure{kConfigError, "--batch must be >= 1"};
  if (cfg.parallel < 1) throw Failure{kConfigError, "--parallel must be >= 1"};
  if (cfg.in_flight < 1) throw Failure{kConfigError, "--in-flight must be >= 1"};
}

int cmd_translate(const TranslateConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  check_config(cfg);

  HttpOptions http;
  if (const char* key = std::getenv(kApiKeyEnv)) http.api_key = key;
  http.requests_per_second = cfg.rate;
  http.max_in_flight = cfg.in_flight;

  std::unique_ptr<Backend> backend;
  try {
    backend = make_backend(cfg.backend, http);
  } catch (const std::invalid_argument& e) {
    throw Failure{kConfigError, e.what()};
  } catch (const std::exception& e) {
    throw Failure{kParseError, e.what()};
  }

  RunReport report;
  report.config = effective_config(cfg);

  std::vector<DatasetSplit> splits;
  const std::string* inputs[] = {&cfg.input_train, &cfg.input_dev, &cfg.input_test};
  for (std::size_t i = 0; i < 3; ++i) {
    if (inputs[i]->empty()) continue;
    ParseStats stats;
    DatasetSplit split = load_split(*inputs[i], kSplitNames[i], &stats);
    report.dropped_empty += stats.dropped_empty;
    if (normalization_enabled(cfg)) {
      for (TaggedSentence& s : split.sentences) s = normalize_iob1_to_iob2(std::move(s));
    }
    splits.push_back(std::move(split));
  }

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw Failure{kIoError, "cannot create " + cfg.out + ": " + ec.message()};

  std::unique_ptr<TranslationCache> cache;
  try {
    cache = cfg.cache.empty() ? std::make_unique<TranslationCache>()
                              : std::make_unique<TranslationCache>(fs::path(cfg.cache));
  } catch (const CacheError& e) {
    throw Failure{kIoError, e.what()};
  }
  for (const CacheCorrupt& bad : cache->load_errors()) {
    err << "warning: " << cfg.cache << ":" << bad.line << ": skipped corrupt cache record ("
        << bad.message << ")\n";
  }
  CachedBackend cached(*backend, *cache);

  PipelineOptions options;
  options.parallelism = cfg.parallel;
  options.batch = cfg.batch;
  options.on_backend_error =
      cfg.on_backend_error == "strict" ? FailurePolicy::kStrict : FailurePolicy::kLenient;

  std::string exclusions;
  for (const DatasetSplit& split : splits) {
    SplitProjection projection;
    try {
      projection = project_split(split, cached, {cfg.src, cfg.tgt}, options);
    } catch (const AbortedRun& e) {
      throw Failure{kStrictAbort, e.what()};
    } catch (const CacheError& e) {
      throw Failure{kIoError, e.what()};
    }
    write_file(fs::path(cfg.out) / (split.name + ".conll"), serialize_conll(projection.projected));
    for (const ProjectionOutcome& outcome : projection.outcomes) {
      if (!outcome.projected()) exclusions += exclusion_record(outcome, split.name) + "\n";
    }
    report.splits.push_back(std::move(projection.report));
  }
  write_file(fs::path(cfg.out) / "exclusions.jsonl", exclusions);

  report.cache_hits = cached.cache_hits();
  report.cache_misses = cached.cache_misses();
  report.backend_calls = cached.backend_calls();
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << format_run_summary(report);
  if (!cfg.report.empty()) write_file(cfg.report, run_report_json(report));
  return kOk;
}

CorpusStats load_corpus(const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw Failure{kConfigError, "expected NAME=DIR, got '" + spec + "'"};
  }
  CorpusStats corpus;
  corpus.name = spec.substr(0, eq);
  const fs::path dir = spec.substr(eq + 1);
  if (!fs::is_directory(dir)) throw Failure{kConfigError, "corpus directory not found: " + dir.string()};
  std::optional<SplitStats>* slots[] = {&corpus.train, &corpus.dev, &corpus.test};
  bool any = false;
  for (std::size_t i = 0; i < 3; ++i) {
    const fs::path file = dir / (std::string(kSplitNames[i]) + ".conll");
    if (!fs::is_regular_file(file)) continue;
    *slots[i] = split_stats(load_split(file, kSplitNames[i]));
    any = true;
  }
  if (!any) {
    throw Failure{kConfigError, "no train.conll, dev.conll or test.conll in " + dir.string()};
  }
  return corpus;
}

int cmd_stats(const std::vector<std::string>& corpora, const std::string& json_path,
              std::ostream& out) {
  std::vector<CorpusStats> loaded;
  for (const std::string& spec : corpora) loaded.push_back(load_corpus(spec));
  out << format_stats_table(loaded);
  if (!json_path.empty()) write_file(json_path, stats_json(loaded));
  return kOk;
}

int cmd_validate(const std::string& path, const std::string& profile, std::ostream& out) {
  if (!fs::is_regular_file(path)) throw Failure{kConfigError, "input file not found: " + path};
  ParseStats stats;
  const DatasetSplit split = load_split(path, "other", &stats);
  std::size_t violations = 0;
  for (std::size_t k = 0; k < split.sentences.size(); ++k) {
    TaggedSentence sentence = split.sentences[k];
    if (profile == "conll2003") sentence = normalize_iob1_to_iob2(std::move(sentence));
    for (const Violation& v : validate_scheme(sentence)) {
      out << path << ":" << stats.first_lines[k] + v.index << ": " << v.message << "\n";
      ++violations;
    }
  }
  out << split.sentences.size() << " sentences, " << violations << " violations\n";
  return violations == 0 ? kOk : kViolations;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  if (text.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (const char c : text) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument(std::string(what) + " is not a number: " + std::string(text));
    }
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

}  // namespace

std::unique_ptr<Backend> make_backend(std::string_view spec, const HttpOptions& http) {
  if (spec == "identity") return std::make_unique<IdentityBackend>();
  if (spec.starts_with("dict:")) {
    const fs::path path(spec.substr(5));
    if (!fs::is_regular_file(path)) {
      throw std::invalid_argument("dictionary file not found: " + path.string());
    }
    return std::make_unique<DictionaryBackend>(DictionaryBackend::load(path));
  }
  if (spec == "scramble:reverse") {
    return std::make_unique<ScramblerBackend>(ScramblerBackend::Mode::kReverse, 0);
  }
  if (spec.starts_with("scramble:rotate:")) {
    return std::make_unique<ScramblerBackend>(ScramblerBackend::Mode::kRotate,
                                              parse_u64(spec.substr(16), "rotation"));
  }
  if (spec.starts_with("scramble:")) {
    return std::make_unique<ScramblerBackend>(ScramblerBackend::Mode::kShuffle,
                                              parse_u64(spec.substr(9), "seed"));
  }
  // Both "http:<url>" and a bare "http(s)://..." URL are accepted.
  const bool bare_url = spec.starts_with("http://") || spec.starts_with("https://");
  if (bare_url || spec.starts_with("http:")) {
    HttpOptions options = http;
    options.url = std::string(bare_url ? spec : spec.substr(5));
    return std::make_unique<HttpBackend>(std::move(options));
  }
  throw std::invalid_argument("unknown backend '" + std::string(spec) + "'");
}

namespace {

// Fills options not given on the command line from a flat config file.
// CLI11 only reads config files on the root app, so subcommand keys are
// applied here.
void apply_config_file(CLI::App& sub, const std::string& path) {
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(path)) {
    if (!item.parents.empty()) {
      throw CLI::ConversionError(path + ": unexpected section for key '" + item.name + "'");
    }
    if (item.name == "config") throw CLI::ConversionError(path + ": config files do not nest");
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw CLI::ConversionError(path + ": unknown key '" + item.name + "'");
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Project NER annotations onto machine-translated text", "transproj"};
  app.require_subcommand(1);

  TranslateConfig cfg;
  CLI::App* translate = app.add_subcommand("translate", "Project a corpus into the target language");
  std::string config_path;
  translate->add_option("--config", config_path, "Flat 'key = value' file; keys mirror the flags");
  translate->add_option("--input-train", cfg.input_train, "Training split (CoNLL)");
  translate->add_option("--input-dev", cfg.input_dev, "Development split (CoNLL)");
  translate->add_option("--input-test", cfg.input_test, "Test split (CoNLL)");
  translate->add_option("--out", cfg.out, "Output directory");
  translate->add_option("--src", cfg.src, "Source language code")->capture_default_str();
  translate->add_option("--tgt", cfg.tgt, "Target language code")->capture_default_str();
  translate
      ->add_option("--backend", cfg.backend,
                   "identity | dict:<tsv> | scramble:<seed> | scramble:reverse | "
                   "scramble:rotate:<k> | http:<url>")
      ->capture_default_str();
  translate->add_option("--cache", cfg.cache, "Append-only translation cache file");
  translate->add_option("--batch", cfg.batch, "Sentences per backend call")->capture_default_str();
  translate->add_option("--parallel", cfg.parallel, "Concurrent backend calls")->capture_default_str();
  translate->add_option("--on-backend-error", cfg.on_backend_error, "lenient | strict")
      ->check(CLI::IsMember({"lenient", "strict"}))
      ->capture_default_str();
  translate->add_option("--profile", cfg.profile, "Corpus profile")
      ->check(CLI::IsMember({"generic", "conll2003", "wnut", "ontonotes", "ncbi"}))
      ->capture_default_str();
  translate->add_option("--normalize-iob1", cfg.normalize_iob1,
                        "Rewrite IOB1 tags to IOB2: auto (on for conll2003) | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  translate->add_option("--report", cfg.report, "Write the run report as JSON");
  translate->add_option("--rate", cfg.rate, "HTTP requests per second (<= 0: unlimited)")
      ->capture_default_str();
  translate->add_option("--in-flight", cfg.in_flight, "Maximum concurrent HTTP requests")
      ->capture_default_str();

  std::vector<std::string> corpora;
  std::string stats_json_path;
  CLI::App* stats = app.add_subcommand("stats", "Instance counts, averages and deltas");
  stats->add_option("--corpus", corpora, "NAME=DIR with train/dev/test.conll; repeatable")
      ->required();
  stats->add_option("--json", stats_json_path, "Also write the numbers as JSON");

  std::string validate_path;
  std::string validate_profile = "generic";
  CLI::App* validate = app.add_subcommand("validate", "Check a corpus for IOB2 violations");
  validate->add_option("path", validate_path, "CoNLL file")->required();
  validate->add_option("--profile", validate_profile, "Corpus profile")
      ->check(CLI::IsMember({"generic", "conll2003", "wnut", "ontonotes", "ncbi"}));

  std::vector<char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*translate && !config_path.empty()) apply_config_file(*translate, config_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*translate) return cmd_translate(cfg, out, err);
    if (*stats) return cmd_stats(corpora, stats_json_path, out);
    if (*validate) return cmd_validate(validate_path, validate_profile, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  }
  return kConfigError;
}

}  // namespace transproj::cli
