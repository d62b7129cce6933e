#pragma once

// Run configuration: JSON ingestion, defaults and command-line overrides.

#include <map>
#include <string>
#include <vector>

#include "wsheet/worldsheet.hpp"

namespace wsheet {

enum class Command { Validate, Curvature, Front, Singular, Verify };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Named tolerances with their defaults.
const std::map<std::string, double>& default_tolerances();

struct RunConfig {
  Command command = Command::Verify;
  std::string source;  // "config:<path>" or "fixture:<name>"
  WorldSheetSpec spec;
  std::map<std::string, int> grid;  // u1..us, a1..a_{k-2}, t
  std::map<std::string, double> tolerances;
  std::vector<int> branches{1};     // sign branches of xi when k = 2
  int verify_samples = 100;
  unsigned long long seed = 1;
  std::string out_dir = "out";

  double tol(const std::string& key) const;
  int grid_count(const std::string& axis) const;
  std::vector<std::string> axis_names() const;  // u1..us, a1..a_{k-2}, t
};

/// Parses and validates a configuration document. Schema violations raise
/// ConfigError whose message starts with the JSON pointer of the offending field.
RunConfig config_from_json(const std::string& text, const std::string& source = "config");

/// Reads `path` and calls config_from_json.
RunConfig load_config(const std::string& path);

/// A config for a built-in fixture with every default applied.
RunConfig fixture_config(const std::string& name);

/// Applies "KEY=VAL" overrides. Unknown keys and malformed values raise ConfigError.
void apply_tolerance_override(RunConfig& cfg, const std::string& assignment);
void apply_grid_override(RunConfig& cfg, const std::string& assignment);

/// Fills missing grid axes with 33 and checks every count is at least `min_count`.
void finalize_grid(RunConfig& cfg, int min_count = 3);

}  // namespace wsheet
