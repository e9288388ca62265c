#include "bregvi/optimizers.hpp"

#include <cmath>
#include <stdexcept>

#include "bregvi/raygeom.hpp"

namespace bregvi {

Vector gd_step(const BregmanObjective& obj, const Vector& phi, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gd_step: gamma must be positive");
  require_in_domain(obj.model(), phi);
  Vector next = phi - gamma * obj.grad(phi);
  if (!next.allFinite()) throw std::runtime_error("gd_step: iterate diverged");
  return next;
}

Vector ngd_step(const BregmanObjective& obj, const Vector& phi, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("ngd_step: eta must be positive");
  require_in_domain(obj.model(), phi);
  return obj.optimum() + (1.0 - eta) * (phi - obj.optimum());
}

namespace {

void validate_schedule(Method method, const StepSchedule& schedule) {
  if (schedule.kind == StepSchedule::Kind::diminishing) {
    if (!(schedule.value > 0.0 && schedule.value < 1.0)) {
      throw std::invalid_argument("diminishing schedule requires 0 < c < 1");
    }
  } else if (method == Method::ngd) {
    if (!(schedule.value > 0.0 && schedule.value < 2.0)) {
      throw std::invalid_argument("constant NGD requires 0 < eta < 2");
    }
  } else if (!(schedule.value > 0.0)) {
    throw std::invalid_argument("constant GD requires gamma > 0");
  }
}

}  // namespace

Trajectory run(const BregmanObjective& obj, const Vector& phi0, Method method,
               const StepSchedule& schedule, const RunOptions& opts) {
  if (opts.max_iters < 1) throw std::invalid_argument("run: max_iters must be >= 1");
  if (!opts.per_step_optimal) validate_schedule(method, schedule);
  require_in_domain(obj.model(), phi0);

  const Vector& phi_star = obj.optimum();
  const Vector delta0 = phi0 - phi_star;
  const double dist0 = delta0.norm();
  const Vector u = dist0 > 0.0 ? Vector(delta0 / dist0) : Vector(Vector::Zero(phi0.size()));

  Trajectory traj;
  auto record = [&](const Vector& phi) {
    const Vector delta = phi - phi_star;
    traj.iterates.push_back(phi);
    traj.dist.push_back(delta.norm());
    traj.loss.push_back(obj.neg_elbo(phi));
    traj.collinearity.push_back((delta - delta.dot(u) * u).norm());
  };
  record(phi0);

  Vector phi = phi0;
  for (int k = 0; k < opts.max_iters; ++k) {
    if (traj.dist.back() <= opts.dist_tol) break;
    Vector next;
    if (method == Method::ngd) {
      next = ngd_step(obj, phi, schedule.step(k + 1));
    } else {
      double gamma = schedule.step(k + 1);
      if (opts.per_step_optimal) {
        const RayEnvelope env = spectral_envelope(obj, phi, opts.envelope_grid);
        gamma = optimal_gd_step(env.alpha, env.beta);
      }
      next = gd_step(obj, phi, gamma);
    }
    if (opts.clamp_box) {
      const double b = *opts.clamp_box;
      next = next.cwiseMax(-b).cwiseMin(b);
    }
    if (!std::isfinite(obj.neg_elbo(next))) {
      throw std::runtime_error("run: objective diverged");
    }
    record(next);
    const double prev = traj.dist[traj.dist.size() - 2];
    traj.contraction.push_back(prev >= 1e-300
                                   ? std::optional<double>(traj.dist.back() / prev)
                                   : std::nullopt);
    phi = next;
  }
  return traj;
}

double optimal_gd_step(double alpha, double beta) {
  if (!(alpha > 0.0 && beta >= alpha)) {
    throw std::invalid_argument("optimal_gd_step: requires 0 < alpha <= beta");
  }
  return 2.0 / (alpha + beta);
}

double gd_contraction_factor(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0 && beta >= alpha && gamma > 0.0)) {
    throw std::invalid_argument("gd_contraction_factor: invalid arguments");
  }
  return std::fmax(std::fabs(1.0 - gamma * alpha), std::fabs(1.0 - gamma * beta));
}

std::pair<double, double> ngd_theoretical_bounds(const StepSchedule& schedule, int k,
                                                 double dist0, double kappa0) {
  if (k < 0) throw std::invalid_argument("ngd_theoretical_bounds: k must be >= 0");
  if (schedule.kind == StepSchedule::Kind::constant) {
    if (!(schedule.value > 0.0 && schedule.value < 2.0)) {
      throw std::invalid_argument("ngd_theoretical_bounds: constant eta must be in (0, 2)");
    }
    const double r = std::pow(std::fabs(1.0 - schedule.value), k);
    return {r * dist0, kappa0 * r * r};
  }
  if (!(schedule.value > 0.0 && schedule.value < 1.0)) {
    throw std::invalid_argument("ngd_theoretical_bounds: diminishing c must be in (0, 1)");
  }
  double sum = 0.0;
  for (int i = 1; i <= k; ++i) sum += schedule.step(i);
  return {std::exp(-sum) * dist0, kappa0 * std::exp(-2.0 * sum)};
}

}  // namespace bregvi
