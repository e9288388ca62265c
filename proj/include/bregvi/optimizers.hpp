#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bregvi/objective.hpp"
#include "bregvi/types.hpp"

namespace bregvi {

/// Step-size schedule: constant value, or diminishing c / i with the first
/// step taken at iteration i = 1.
struct StepSchedule {
  enum class Kind { constant, diminishing };

  Kind kind = Kind::constant;
  double value = 1.0;

  static StepSchedule constant(double v) { return {Kind::constant, v}; }
  static StepSchedule diminishing(double c) { return {Kind::diminishing, c}; }

  /// Step size at iteration i >= 1.
  double step(int i) const { return kind == Kind::constant ? value : value / i; }
};

enum class Method { gd, ngd };

struct RunOptions {
  int max_iters = 100000;
  double dist_tol = 1e-10;
  /// GD only: recompute the ray envelope at each iterate and use the
  /// optimal step 2/(alpha_k + beta_k), ignoring the schedule value.
  bool per_step_optimal = false;
  int envelope_grid = 257;
  /// Optional clamp of iterates to [-box, box]^d.
  std::optional<double> clamp_box;
};

/// Record of an optimizer run. contraction[k] = dist[k+1]/dist[k] is absent
/// when dist[k] underflows below 1e-300.
struct Trajectory {
  std::vector<Vector> iterates;
  std::vector<double> dist;                          // ||phi_k - phi*||
  std::vector<double> loss;                          // L(phi_k)
  std::vector<std::optional<double>> contraction;    // size iterates-1
  std::vector<double> collinearity;                  // residual off the phi0 ray
};

/// phi - gamma H(phi)(phi - phi*).
Vector gd_step(const BregmanObjective& obj, const Vector& phi, double gamma);

/// phi* + (1 - eta)(phi - phi*); no linear solve involved.
Vector ngd_step(const BregmanObjective& obj, const Vector& phi, double eta);

Trajectory run(const BregmanObjective& obj, const Vector& phi0, Method method,
               const StepSchedule& schedule, const RunOptions& opts = {});

/// 2 / (alpha + beta); requires 0 < alpha <= beta.
double optimal_gd_step(double alpha, double beta);

/// max{|1 - gamma alpha|, |1 - gamma beta|}.
double gd_contraction_factor(double alpha, double beta, double gamma);

/// Theoretical NGD envelopes after k steps: (distance bound, loss ratio
/// bound). Constant eta: |1-eta|^k dist0 and kappa0 |1-eta|^{2k}.
/// Diminishing: exp(-sum eta_i) dist0 and kappa0 exp(-2 sum eta_i), with the
/// sum over i = 1..k.
std::pair<double, double> ngd_theoretical_bounds(const StepSchedule& schedule, int k,
                                                 double dist0, double kappa0);

}  // namespace bregvi
