#pragma once

// Command dispatch and report emission.

#include <map>
#include <string>

#include <json.hpp>

#include "wsheet/config.hpp"
#include "wsheet/pedal.hpp"

namespace wsheet {

/// Shortest decimal string that reads back to the same double.
std::string format_real(double x);

/// Sorted keys, two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& report);

/// The sampling grid of a config: u axes over the domain, sphere-angle axes
/// (k >= 3) or the configured sign branches (k = 2), and the t axis.
FrontGrid front_grid(const RunConfig& cfg);

nlohmann::json validate_report(const RunConfig& cfg);
std::string curvature_csv(const RunConfig& cfg);
nlohmann::json singular_report(const RunConfig& cfg);
nlohmann::json verify_report(const RunConfig& cfg);

/// File name -> contents: front.csv plus front.obj (n = 2) or one
/// front_tNNN.obj per t slice (n = 3).
std::map<std::string, std::string> front_files(const RunConfig& cfg);

/// True when the report's "failures" array is nonempty.
bool report_failed(const nlohmann::json& report);

struct RunResult {
  int exit_code = 0;                   // 0 iff no report contains a failure
  std::map<std::string, std::string> files;  // written under cfg.out_dir
  std::string summary;
};

/// Runs cfg.command, writes its artifacts under cfg.out_dir and returns the outcome.
/// Module errors are rethrown as RunError with the command and point attached.
RunResult run(const RunConfig& cfg);

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsheet
