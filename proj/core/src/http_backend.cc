#include "transproj/http_backend.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace transproj {
namespace {

using nlohmann::json;

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

bool retryable_status(int status) { return status >= 500 || status == 429; }

}  // namespace

HttpBackend::HttpBackend(HttpOptions options)
    : options_(std::move(options)),
      limiter_(options_.requests_per_second, 1.0) {
  const std::string& url = options_.url;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("backend URL needs a scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("unsupported URL scheme '" + scheme + "'");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == scheme_end + 3) {
    throw std::invalid_argument("backend URL has no host: " + url);
  }
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
  if (options_.max_texts_per_request == 0) options_.max_texts_per_request = 1;
  in_flight_ = std::make_unique<std::counting_semaphore<>>(
      static_cast<std::ptrdiff_t>(options_.max_in_flight));
}

HttpBackend::~HttpBackend() = default;

std::vector<std::string> HttpBackend::translate(const TranslationRequest& request) {
  std::vector<std::string> out;
  out.reserve(request.texts.size());
  const std::size_t step = options_.max_texts_per_request;
  for (std::size_t begin = 0; begin < request.texts.size(); begin += step) {
    const std::size_t end = std::min(request.texts.size(), begin + step);
    TranslationRequest chunk{
        {request.texts.begin() + static_cast<std::ptrdiff_t>(begin),
         request.texts.begin() + static_cast<std::ptrdiff_t>(end)},
        request.source_lang,
        request.target_lang};
    for (std::string& text : send_chunk(chunk)) out.push_back(std::move(text));
  }
  return out;
}

std::vector<std::string> HttpBackend::send_chunk(const TranslationRequest& chunk) {
  const std::string body =
      json{{"texts", chunk.texts}, {"source", chunk.source_lang}, {"target", chunk.target_lang}}
          .dump(-1, ' ', false, json::error_handler_t::replace);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }

  thread_local std::mt19937 jitter_rng{std::random_device{}()};
  std::uniform_real_distribution<double> jitter(1.0, 1.5);

  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay_ms = static_cast<double>(options_.backoff_base.count()) *
                              std::pow(options_.backoff_factor, attempt - 1) *
                              jitter(jitter_rng);
      std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_ms));
    }
    limiter_.acquire();

    httplib::Result res;
    {
      SemaphoreGuard guard(*in_flight_);
      ++requests_;
      httplib::Client client(origin_);
      client.set_connection_timeout(options_.timeout);
      client.set_read_timeout(options_.timeout);
      client.set_write_timeout(options_.timeout);
      res = client.Post(path_, headers, body, "application/json");
    }

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(BackendError::Kind::kUnavailable,
                         id() + ": HTTP " + std::to_string(res->status));
    }

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw BackendError(BackendError::Kind::kProtocol,
                         id() + ": response is not JSON: " + e.what());
    }
    auto it = reply.find("translations");
    if (!reply.is_object() || it == reply.end() || !it->is_array()) {
      throw BackendError(BackendError::Kind::kProtocol,
                         id() + ": response lacks a 'translations' array");
    }
    if (it->size() != chunk.texts.size()) {
      throw BackendError(BackendError::Kind::kProtocol,
                         id() + ": expected " + std::to_string(chunk.texts.size()) +
                             " translations, got " + std::to_string(it->size()));
    }
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const json& item : *it) {
      if (!item.is_string()) {
        throw BackendError(BackendError::Kind::kProtocol,
                           id() + ": non-string translation");
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  }
  throw BackendError(BackendError::Kind::kUnavailable,
                     id() + ": giving up after " +
                         std::to_string(options_.max_retries + 1) +
                         " attempts (" + last_error + ")");
}

}  // namespace transproj
