#include "gausscap_cli/format.hpp"

#include <fmt/format.h>

#include <cmath>

#include "gausscap/units.hpp"

namespace gausscap::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  return fmt::format("{:.12g}", x);
}

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return round_significant(x, kSignificantDigits);
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "k",     "nc",    "n",     "n_prime", "n0_prime", "d",        "lambda1_abs", "lambda2_abs", "h_in",
      "h_out", "h_exch", "c_e",  "c1_lower", "gain",    "j",        "q_g",         "q_theta"};
  return cols;
}

std::vector<double> record_values(const OneModeReport& r) {
  return {r.k,     r.nc,     r.n,   r.n_prime,  r.n0_prime, r.d,    r.lambda_abs[0], r.lambda_abs[1], r.h_in,
          r.h_out, r.h_exch, r.c_e, r.c1_lower, r.gain,     r.j,    r.q_g,           r.q_theta};
}

std::string unit_name() { return log_base() == LogBase::bits ? "bits" : "nats"; }

nlohmann::ordered_json record_json(const OneModeReport& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["schema"] = kSchemaVersion;
  j["units"] = unit_name();
  const auto& cols = record_columns();
  const auto vals = record_values(r);
  for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = json_number(vals[i]);
  j["gain_infinite"] = r.gain_infinite;
  j["labels"] = {{"c1_lower", kC1Label}};
  return j;
}

void write_text(std::ostream& os, const OneModeReport& r) {
  const auto& cols = record_columns();
  const auto vals = record_values(r);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << fmt::format("{:<12} {}", cols[i], format_number(vals[i]));
    if (cols[i] == "c1_lower") os << "  (" << kC1Label << ")";
    if (cols[i] == "gain" && r.gain_infinite) os << "  (c1_lower = 0)";
    os << '\n';
  }
  os << fmt::format("{:<12} {}\n", "units", unit_name());
}

void write_csv_comment(std::ostream& os, const std::string& text) { os << "# " << text << '\n'; }

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  write_csv_row(os, cells);
}

}  // namespace gausscap::cli
