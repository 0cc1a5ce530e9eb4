#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace vnat {

/// Wall-clock allowance for a long-running phase. Default-constructed budgets
/// never expire.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  Budget() = default;
  explicit Budget(std::chrono::milliseconds allowance)
      : start_(Clock::now()), deadline_(start_ + allowance) {}

  static Budget unlimited() { return Budget(); }

  bool expired() const { return deadline_ && Clock::now() >= *deadline_; }
  double elapsed_seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  std::optional<std::chrono::milliseconds> allowance() const {
    if (!deadline_) return std::nullopt;
    return std::chrono::duration_cast<std::chrono::milliseconds>(*deadline_ - start_);
  }

 private:
  Clock::time_point start_ = Clock::now();
  std::optional<Clock::time_point> deadline_;
};

/// Parses durations such as "90s", "30m", "2h", "1500ms" or a bare number of seconds.
std::chrono::milliseconds parse_duration(const std::string& text);

}  // namespace vnat
