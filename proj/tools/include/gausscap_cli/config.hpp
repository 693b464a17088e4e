#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gausscap::cli {

/// Unreadable input or unwritable output (exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed command line or configuration (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Plain `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; keys may be written with or without leading dashes.
ConfigEntries parse_config(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

}  // namespace gausscap::cli
