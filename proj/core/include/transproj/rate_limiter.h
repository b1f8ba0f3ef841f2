#pragma once

#include <chrono>
#include <mutex>

namespace transproj {

// Token bucket. acquire() blocks until a token is available; a non-positive
// rate disables limiting.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  TokenBucket(double tokens_per_second, double burst);

  void acquire();
  // Non-blocking variant; returns false if no token is available now.
  bool try_acquire();

  double rate() const { return rate_; }

 private:
  void refill(Clock::time_point now);

  const double rate_;
  const double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mutex_;
};

}  // namespace transproj
