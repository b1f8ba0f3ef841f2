#pragma once

// Generic HTTP/JSON translation service adapter.
//
// Each request is a POST of
//
//   {"texts": ["...", ...], "source": "en", "target": "fa"}
//
// and the service must answer 200 with
//
//   {"translations": ["...", ...]}
//
// holding exactly one string per input text, in order. When an API key is
// configured it is sent as "Authorization: Bearer <key>".

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>

#include "transproj/backend.h"
#include "transproj/rate_limiter.h"

namespace transproj {

inline constexpr const char* kApiKeyEnv = "TRANSPROJ_API_KEY";

struct HttpOptions {
  std::string url;  // http(s)://host[:port][/path]
  std::string api_key;
  int max_retries = 3;  // extra attempts after the first
  std::chrono::milliseconds backoff_base{500};
  double backoff_factor = 2.0;
  std::size_t max_in_flight = 4;
  std::size_t max_texts_per_request = 32;
  double requests_per_second = 5.0;  // <= 0 disables rate limiting
  std::chrono::seconds timeout{30};
};

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpOptions options);
  ~HttpBackend() override;

  std::string id() const override { return "http:" + options_.url; }
  std::vector<std::string> translate(const TranslationRequest& request) override;

  // HTTP requests attempted so far, retries included.
  std::size_t request_count() const { return requests_.load(); }
  const HttpOptions& options() const { return options_; }

 private:
  std::vector<std::string> send_chunk(const TranslationRequest& chunk);

  HttpOptions options_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  TokenBucket limiter_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace transproj
