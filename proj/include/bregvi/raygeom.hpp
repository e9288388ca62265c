#pragma once

#include <utility>
#include <vector>

#include "bregvi/objective.hpp"
#include "bregvi/types.hpp"

namespace bregvi {

struct RaySample {
  double s = 0.0;
  double lam_min = 0.0;
  double lam_max = 0.0;
};

/// Spectral envelope of the Fisher information along the segment
/// phi* -> phi, sampled on a uniform closed grid.
struct RayEnvelope {
  double alpha = 0.0;  // grid infimum of lambda_min(H(phi_s))
  double beta = 0.0;   // grid supremum of lambda_max(H(phi_s))
  std::vector<RaySample> samples;
  int grid_size = 0;
  Vector phi_star;
  Vector phi;

  /// Max adjacent-sample spectral jump; bounds the grid-vs-continuum bias
  /// of alpha/beta (Lipschitz modulus times the grid spacing).
  double grid_tolerance() const;
};

/// phi_s = phi* + s (phi - phi*), s in [0, 1].
Vector ray_point(const Vector& phi_star, const Vector& phi, double s);

/// Envelope over a closed uniform grid. grid_size must be odd and >= 3 so
/// that s = 0, 0.5, 1 land on nodes.
RayEnvelope spectral_envelope(const BregmanObjective& obj, const Vector& phi,
                              int grid_size = 257);

/// L(phi) via the ray integral  ∫₀¹ s δ' H(phi_s) δ ds, composite Simpson.
double integral_neg_elbo(const BregmanObjective& obj, const Vector& phi,
                         int panels = 2048);

/// (alpha/2 ||δ||², beta/2 ||δ||²) — the two-sided quadratic bounds on L(phi).
/// env must have been computed on the same (phi*, phi) ray.
std::pair<double, double> quadratic_bounds(const BregmanObjective& obj, const Vector& phi,
                                           const RayEnvelope& env);

struct OnePointReport {
  double inner = 0.0;     // <grad L(phi), δ>
  double delta_sq = 0.0;  // ||δ||²
  double L = 0.0;
  double grad_lower = 0.0;  // alpha ||δ||²
  double grad_upper = 0.0;  // beta  ||δ||²
  double pl_lower = 0.0;    // (2 alpha / beta) L
  double pl_upper = 0.0;    // (2 beta / alpha) L
};

OnePointReport one_point_report(const BregmanObjective& obj, const Vector& phi,
                                const RayEnvelope& env);

/// kappa = beta / alpha; requires alpha > 0.
double condition_number(const RayEnvelope& env);

}  // namespace bregvi
