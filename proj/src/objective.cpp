#include "bregvi/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace bregvi {

double bregman_div(const ExpFamModel& model, const Vector& u, const Vector& v) {
  require_in_domain(model, u);
  require_in_domain(model, v);
  return model.log_partition(u) - model.log_partition(v) - model.mean(v).dot(u - v);
}

BregmanObjective::BregmanObjective(ExpFamModel model, Vector optimum)
    : model_(std::move(model)), optimum_(std::move(optimum)) {
  require_in_domain(model_, optimum_);
}

double BregmanObjective::neg_elbo(const Vector& phi) const {
  require_in_domain(model_, phi);
  return model_.log_partition(optimum_) - model_.log_partition(phi) -
         model_.mean(phi).dot(optimum_ - phi);
}

Vector BregmanObjective::grad(const Vector& phi) const {
  require_in_domain(model_, phi);
  return model_.fisher(phi) * (phi - optimum_);
}

Vector BregmanObjective::nat_grad(const Vector& phi) const {
  require_in_domain(model_, phi);
  return phi - optimum_;
}

std::pair<double, double> three_point_gap(const ExpFamModel& model, const Vector& u,
                                          const Vector& v, const Vector& w) {
  const double lhs = bregman_div(model, u, v) - bregman_div(model, u, w) -
                     (model.mean(w) - model.mean(v)).dot(u - w);
  const double rhs = bregman_div(model, w, v);
  return {lhs, rhs};
}

MonotonicityCheck monotonicity_check(const BregmanObjective& obj, const Vector& phi,
                                     const Vector& phi_prime) {
  MonotonicityCheck c;
  c.lhs = obj.neg_elbo(phi_prime);
  const auto& model = obj.model();
  c.rhs = obj.neg_elbo(phi) +
          (phi - obj.optimum()).dot(model.mean(phi_prime) - model.mean(phi));
  c.slack = c.lhs - c.rhs;
  return c;
}

double kl_oracle_bernoulli(const Vector& phi_star, const Vector& phi) {
  if (phi_star.size() != phi.size()) {
    throw std::invalid_argument("kl_oracle_bernoulli: dimension mismatch");
  }
  double kl = 0.0;
  for (int i = 0; i < phi.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-phi[i]));
    const double q = 1.0 / (1.0 + std::exp(-phi_star[i]));
    kl += p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return kl;
}

}  // namespace bregvi
