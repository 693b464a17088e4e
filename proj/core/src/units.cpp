#include "gausscap/units.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gausscap {
namespace {

std::atomic<LogBase> g_log_base{LogBase::bits};

}  // namespace

void set_log_base(LogBase base) noexcept { g_log_base.store(base, std::memory_order_relaxed); }

LogBase log_base() noexcept { return g_log_base.load(std::memory_order_relaxed); }

LogBase parse_log_base(std::string_view text) {
  if (text == "2" || text == "bits") return LogBase::bits;
  if (text == "e" || text == "nats") return LogBase::nats;
  throw std::invalid_argument("log base must be one of {2, e}, got '" + std::string(text) + "'");
}

double from_nats(double nats) noexcept {
  return log_base() == LogBase::bits ? nats / std::numbers::ln2 : nats;
}

double log_units(double x) noexcept { return from_nats(std::log(x)); }

}  // namespace gausscap
