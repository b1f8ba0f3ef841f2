#include "transproj/rate_limiter.h"

#include <algorithm>
#include <thread>

namespace transproj {

TokenBucket::TokenBucket(double tokens_per_second, double burst)
    : rate_(tokens_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(Clock::now()) {}

void TokenBucket::refill(Clock::time_point now) {
  const std::chrono::duration<double> elapsed = now - last_;
  tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
  last_ = now;
}

bool TokenBucket::try_acquire() {
  if (rate_ <= 0) return true;
  std::lock_guard lock(mutex_);
  refill(Clock::now());
  if (tokens_ < 1.0) return false;
  tokens_ -= 1.0;
  return true;
}

void TokenBucket::acquire() {
  if (rate_ <= 0) return;
  std::unique_lock lock(mutex_);
  for (;;) {
    refill(Clock::now());
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const std::chrono::duration<double> wait((1.0 - tokens_) / rate_);
    lock.unlock();
    std::this_thread::sleep_for(wait);
    lock.lock();
  }
}

}  // namespace transproj
