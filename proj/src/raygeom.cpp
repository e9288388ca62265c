#include "bregvi/raygeom.hpp"

#include <cmath>
#include <stdexcept>

#include "bregvi/verify.hpp"

namespace bregvi {

double RayEnvelope::grid_tolerance() const {
  double jump = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    jump = std::fmax(jump, std::fabs(samples[i].lam_min - samples[i - 1].lam_min));
    jump = std::fmax(jump, std::fabs(samples[i].lam_max - samples[i - 1].lam_max));
  }
  return jump;
}

Vector ray_point(const Vector& phi_star, const Vector& phi, double s) {
  if (phi_star.size() != phi.size()) {
    throw std::invalid_argument("ray_point: endpoint dimension mismatch");
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::out_of_range("ray_point: s must lie in [0, 1]");
  }
  return phi_star + s * (phi - phi_star);
}

RayEnvelope spectral_envelope(const BregmanObjective& obj, const Vector& phi,
                              int grid_size) {
  if (grid_size < 3 || grid_size % 2 == 0) {
    throw std::invalid_argument("spectral_envelope: grid_size must be odd and >= 3");
  }
  require_in_domain(obj.model(), phi);

  RayEnvelope env;
  env.grid_size = grid_size;
  env.phi_star = obj.optimum();
  env.phi = phi;
  env.samples.reserve(grid_size);

  for (int i = 0; i < grid_size; ++i) {
    const double s = static_cast<double>(i) / (grid_size - 1);
    const Matrix h = obj.model().fisher(ray_point(env.phi_star, phi, s));
    if (!h.allFinite()) {
      throw std::runtime_error("spectral_envelope: Fisher evaluation failed on segment");
    }
    const auto [lmin, lmax] = eig_extremes(h);
    env.samples.push_back({s, lmin, lmax});
    if (i == 0) {
      env.alpha = lmin;
      env.beta = lmax;
    } else {
      env.alpha = std::fmin(env.alpha, lmin);
      env.beta = std::fmax(env.beta, lmax);
    }
  }
  return env;
}

double integral_neg_elbo(const BregmanObjective& obj, const Vector& phi, int panels) {
  require_in_domain(obj.model(), phi);
  const Vector delta = phi - obj.optimum();
  const Vector& phi_star = obj.optimum();
  const auto integrand = [&](double s) {
    const Vector phi_s = phi_star + s * delta;
    return s * delta.dot(obj.model().fisher(phi_s) * delta);
  };
  return simpson(integrand, 0.0, 1.0, panels);
}

std::pair<double, double> quadratic_bounds(const BregmanObjective& obj, const Vector& phi,
                                           const RayEnvelope& env) {
  const bool same_ray = env.phi.size() == phi.size() &&
                        env.phi_star.size() == obj.optimum().size() &&
                        env.phi.isApprox(phi, 0.0) &&
                        env.phi_star.isApprox(obj.optimum(), 0.0);
  if (!same_ray) {
    throw std::invalid_argument("quadratic_bounds: envelope computed on a different ray");
  }
  const double dsq = (phi - obj.optimum()).squaredNorm();
  return {0.5 * env.alpha * dsq, 0.5 * env.beta * dsq};
}

OnePointReport one_point_report(const BregmanObjective& obj, const Vector& phi,
                                const RayEnvelope& env) {
  if (!(env.alpha > 0.0)) {
    throw std::invalid_argument("one_point_report: envelope alpha must be positive");
  }
  const Vector delta = phi - obj.optimum();
  OnePointReport r;
  r.inner = obj.grad(phi).dot(delta);
  r.delta_sq = delta.squaredNorm();
  r.L = obj.neg_elbo(phi);
  r.grad_lower = env.alpha * r.delta_sq;
  r.grad_upper = env.beta * r.delta_sq;
  r.pl_lower = 2.0 * env.alpha / env.beta * r.L;
  r.pl_upper = 2.0 * env.beta / env.alpha * r.L;
  return r;
}

double condition_number(const RayEnvelope& env) {
  if (!(env.alpha > 0.0)) {
    throw std::invalid_argument("condition_number: envelope alpha must be positive");
  }
  return env.beta / env.alpha;
}

}  // namespace bregvi
