#pragma once

// Helpers shared by the unit and acceptance tests: fixture paths, temporary
// directories, a local stub translation server, random sentence generators
// and reference oracles that do not go through the library code paths.

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "transproj/conll.h"

namespace httplib {
class Server;
}

namespace transproj::testing {

std::filesystem::path data_dir();
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Serves POST /translate with the JSON contract of HttpBackend. The default
// translation upper-cases ASCII letters and leaves everything else alone.
class StubTranslationServer {
 public:
  using Translator = std::function<std::string(const std::string&)>;

  explicit StubTranslationServer(Translator translator = {});
  ~StubTranslationServer();

  std::string url() const;  // http://127.0.0.1:<port>/translate
  std::size_t requests() const { return requests_.load(); }
  void reset_requests() { requests_ = 0; }
  // The next |n| requests fail with |status|.
  void fail_next(int n, int status = 503);
  // Responses carry one translation fewer than requested.
  void set_short_response(bool on) { short_response_ = on; }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  Translator translator_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<int> failures_left_{0};
  std::atomic<int> failure_status_{503};
  std::atomic<bool> short_response_{false};
};

std::string upper_ascii(const std::string& text);

// A random valid IOB2 sentence with |min_len|..|max_len| tokens and at most
// |max_entities| entities drawn from |labels|. Tokens are lower-case words
// that never look like placeholders.
TaggedSentence random_sentence(std::mt19937_64& rng, std::size_t min_len,
                               std::size_t max_len, std::size_t max_entities,
                               const std::vector<std::string>& labels);

// Every tag sequence of |length| over O, B-x, I-x for x in |labels|.
std::vector<std::vector<Tag>> all_tag_sequences(std::size_t length,
                                                const std::vector<std::string>& labels);

std::string render(const std::vector<Tag>& tags);

// Brute-force reference for the IOB2 language: renders every placement of
// disjoint labelled spans over |length| positions.
std::set<std::string> reference_iob2_language(std::size_t length,
                                              const std::vector<std::string>& labels);

// (start, end, label) triples by a plain left-to-right scan under IOB1
// reading, which coincides with IOB2 reading on valid IOB2 input.
using SpanTriple = std::tuple<std::size_t, std::size_t, std::string>;
std::vector<SpanTriple> reference_spans(const std::vector<Tag>& tags);

}  // namespace transproj::testing
