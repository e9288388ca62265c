#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bregvi/types.hpp"

namespace bregvi {

/// Invalid experiment configuration; mapped to exit code 2 by the CLI.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ModelDescriptor {
  std::string family = "bernoulli";  // "bernoulli" | "quadratic"
  int dim = 1;
  std::vector<double> spectrum;  // quadratic only; builds diag(spectrum)
};

struct ExperimentSpec {
  std::string name;  // landscape | envelope | trajectory | sweep | verify
  ModelDescriptor model;
  std::vector<double> phi_star;
  std::vector<double> phi0;
  std::string schedule_kind = "constant";
  double schedule_value = 0.5;
  int grid = 257;
  int panels = 2048;
  int max_iters = 100000;
  double tol = 1e-10;
  double interval_lo = -6.0;
  double interval_hi = 6.0;
  int points = 601;
  std::vector<double> ratios = {0.02, 0.05, 0.10, 0.20, 0.30};
  bool worst_case = false;      // sweep: put delta0 mass on extreme eigenvectors
  double gamma_override = 0.0;  // sweep: 0 means use the optimal step
  bool allow_divergent = false;
  bool inject_fault = false;  // verify: negative control
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  /// Parse from JSON, rejecting unknown keys. Throws SpecError.
  static ExperimentSpec from_json(const nlohmann::json& j);

  /// Cross-field validation (odd grid, even panels, schedule ranges, ...).
  void validate() const;
};

struct ExperimentResult {
  std::vector<std::pair<std::string, std::string>> csv_files;  // name -> content
  std::string summary_json;
  bool checks_passed = true;
};

ExperimentResult cmd_landscape(const ExperimentSpec& spec);
ExperimentResult cmd_envelope(const ExperimentSpec& spec);
ExperimentResult cmd_trajectory(const ExperimentSpec& spec);
ExperimentResult cmd_sweep(const ExperimentSpec& spec);
ExperimentResult cmd_verify(const ExperimentSpec& spec);

/// Dispatch by spec.name. Throws SpecError for unknown names.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Write result files plus summary.json into the configured out_dir.
void write_result(const ExperimentResult& result, const std::string& out_dir);

/// Round-trip decimal formatting (17 significant digits).
std::string format_double(double v);

}  // namespace bregvi
