#include "transproj/cache.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace transproj {
namespace {

using nlohmann::json;

// Length-prefixed so that no field content can collide with a separator.
std::string index_key(const CacheKey& key) {
  std::string out;
  for (const std::string* field :
       {&key.backend_id, &key.source_lang, &key.target_lang, &key.source_text}) {
    out += std::to_string(field->size());
    out += ':';
    out += *field;
  }
  return out;
}

std::string errno_message(const std::string& what, const std::filesystem::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

}  // namespace

TranslationCache::TranslationCache() = default;

TranslationCache::TranslationCache(const std::filesystem::path& path) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw CacheError(errno_message("cannot open cache", path));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    const std::string message = errno == EWOULDBLOCK
                                    ? "cache " + path.string() + " is in use by another run"
                                    : errno_message("cannot lock cache", path);
    ::close(fd_);
    fd_ = -1;
    throw CacheError(message);
  }
  load(path);
}

TranslationCache::~TranslationCache() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

void TranslationCache::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot read cache " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    const std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      CacheRecord record = decode(line);
      index_[index_key(record.key())] = std::move(record.target_text);
    } catch (const std::exception& e) {
      load_errors_.push_back({line_no, e.what()});
    }
  }

  // A torn final record must not swallow the next append.
  if (!content.empty() && content.back() != '\n') {
    if (::write(fd_, "\n", 1) != 1) throw CacheError(errno_message("cannot write cache", path));
  }
}

std::optional<std::string> TranslationCache::lookup(const CacheKey& key) const {
  std::shared_lock lock(index_mutex_);
  auto it = index_.find(index_key(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::store(const CacheRecord& record) {
  {
    std::unique_lock lock(index_mutex_);
    index_[index_key(record.key())] = record.target_text;
  }
  if (fd_ < 0) return;

  const std::string line = encode(record) + "\n";
  std::lock_guard lock(writer_mutex_);
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw CacheError(std::string("cannot append to cache: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::size_t TranslationCache::size() const {
  std::shared_lock lock(index_mutex_);
  return index_.size();
}

std::string TranslationCache::encode(const CacheRecord& record) {
  const json j = {
      {"backend_id", record.backend_id},
      {"source_lang", record.source_lang},
      {"target_lang", record.target_lang},
      {"source_text", record.source_text},
      {"target_text", record.target_text},
  };
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

CacheRecord TranslationCache::decode(std::string_view line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw std::runtime_error("record is not an object");
  const auto field = [&](const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) {
      throw std::runtime_error(std::string("missing string field '") + name + "'");
    }
    return it->get<std::string>();
  };
  return {field("backend_id"), field("source_lang"), field("target_lang"),
          field("source_text"), field("target_text")};
}

}  // namespace transproj
