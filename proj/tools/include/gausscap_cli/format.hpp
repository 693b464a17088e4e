#pragma once

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "gausscap/onemode.hpp"

namespace gausscap::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kSignificantDigits = 12;
inline constexpr const char* kC1Label = "conjectured-optimal lower bound";

/// 12 significant digits; infinities as "inf" / "-inf".
std::string format_number(double x);
/// JSON value: the number rounded to 12 significant digits, or the string
/// "inf" / "-inf" / "nan".
nlohmann::ordered_json json_number(double x);

/// Fixed column order of a one-mode output record.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const OneModeReport& r);

nlohmann::ordered_json record_json(const OneModeReport& r);
void write_text(std::ostream& os, const OneModeReport& r);

void write_csv_comment(std::ostream& os, const std::string& text);
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);
void write_csv_row(std::ostream& os, const std::vector<double>& values);

/// "bits" or "nats".
std::string unit_name();

}  // namespace gausscap::cli
