#pragma once

#include <utility>

#include "bregvi/expfam.hpp"
#include "bregvi/types.hpp"

namespace bregvi {

/// Bregman divergence generated by the model's log-partition:
/// D_A(u || v) = A(u) - A(v) - <mu(v), u - v>.
double bregman_div(const ExpFamModel& model, const Vector& u, const Vector& v);

/// The negative ELBO in Bregman form, L(phi) = D_A(phi* || phi), together
/// with its gradient H(phi)(phi - phi*) and the natural gradient phi - phi*.
class BregmanObjective {
 public:
  BregmanObjective(ExpFamModel model, Vector optimum);

  const ExpFamModel& model() const { return model_; }
  const Vector& optimum() const { return optimum_; }
  int dim() const { return model_.dim; }

  double neg_elbo(const Vector& phi) const;
  Vector grad(const Vector& phi) const;

  /// phi - phi*, computed directly (no linear solve).
  Vector nat_grad(const Vector& phi) const;

 private:
  ExpFamModel model_;
  Vector optimum_;
};

/// Both sides of the three-point identity
///   D_A(u||v) - D_A(u||w) - <mu(w) - mu(v), u - w>  =  D_A(w||v).
/// Returns (lhs, rhs); equal in exact arithmetic.
std::pair<double, double> three_point_gap(const ExpFamModel& model, const Vector& u,
                                          const Vector& v, const Vector& w);

struct MonotonicityCheck {
  double lhs = 0.0;    // L(phi')
  double rhs = 0.0;    // L(phi) + <phi - phi*, mu(phi') - mu(phi)>
  double slack = 0.0;  // lhs - rhs, equal to D_A(phi || phi')
};

MonotonicityCheck monotonicity_check(const BregmanObjective& obj, const Vector& phi,
                                     const Vector& phi_prime);

/// Direct KL between d-dimensional product Bernoulli laws q_phi and q_phi*,
/// written in mean coordinates. Independent oracle for neg_elbo.
double kl_oracle_bernoulli(const Vector& phi_star, const Vector& phi);

}  // namespace bregvi
