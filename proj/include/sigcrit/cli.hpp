#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sigcrit/error.hpp"
#include "sigcrit/models.hpp"
#include "sigcrit/spectral.hpp"

namespace sigcrit::cli {

enum class Command { transform, derivatives, analyze };

struct RunConfig {
  Command command{Command::analyze};
  nlohmann::json model_spec;            // as accepted by models::parse_model_spec
  std::filesystem::path model_base_dir; // resolves relative samples_path entries
  int max_order{10};
  double tol{1e-3};
  double eps{1e-12};
  std::optional<double> half_span;
  std::optional<std::size_t> points;
  std::filesystem::path output_dir{"out"};
  bool emit_plots{false};
  bool force{false};

  /// Throws ConfigError on violated invariants.
  void validate() const;
  models::SigmoidModel model() const;
  spectral::GridPlan plan(const models::SigmoidModel& model) const;
};

/// Reads a run file: {"model": {...} | "model_path": "...", "max_order", "tol",
/// "grid": {"T", "N", "eps"}, "output_dir", "plots"}.
RunConfig load_run_config(const std::filesystem::path& path);

/// Closed-form and FFT spectra side by side plus an error summary.
int cmd_transform(const RunConfig& config);
/// Normalized y^(n) and envelope samples for n = 1..max_order.
int cmd_derivatives(const RunConfig& config);
/// Critical-point report and the per-order table.
int cmd_analyze(const RunConfig& config);

int exit_code(ErrorKind kind);
/// Single-line JSON error record.
std::string error_json(const std::string& category, ErrorKind kind, const std::string& message);

/// Full command-line entry point; never throws.
int run(int argc, char** argv);

}  // namespace sigcrit::cli
