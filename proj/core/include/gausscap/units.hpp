#pragma once

#include <string_view>

namespace gausscap {

/// Unit for every entropy and capacity the library reports.
enum class LogBase { bits, nats };

/// Process-wide unit setting (default: bits). Thread-safe.
void set_log_base(LogBase base) noexcept;
LogBase log_base() noexcept;

/// Parses "2" / "bits" / "e" / "nats"; throws std::invalid_argument otherwise.
LogBase parse_log_base(std::string_view text);

/// Converts a quantity in nats to the configured unit.
double from_nats(double nats) noexcept;

/// Logarithm in the configured base.
double log_units(double x) noexcept;

/// Sets the unit for the lifetime of the guard and restores the previous one.
class ScopedLogBase {
 public:
  explicit ScopedLogBase(LogBase base) noexcept : previous_(log_base()) { set_log_base(base); }
  ~ScopedLogBase() { set_log_base(previous_); }
  ScopedLogBase(const ScopedLogBase&) = delete;
  ScopedLogBase& operator=(const ScopedLogBase&) = delete;

 private:
  LogBase previous_;
};

}  // namespace gausscap
