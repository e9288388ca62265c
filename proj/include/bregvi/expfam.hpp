#pragma once

#include <functional>

#include "bregvi/types.hpp"

namespace bregvi {

/// An exponential family represented entirely through its log-partition
/// function A: the mean map is ∇A and the Fisher information is ∇²A.
struct ExpFamModel {
  int dim = 0;
  std::function<double(const Vector&)> log_partition;
  std::function<Vector(const Vector&)> mean;
  std::function<Matrix(const Vector&)> fisher;
  std::function<bool(const Vector&)> domain;
};

/// Product of d independent Bernoulli factors in natural coordinates:
/// A(phi) = sum_i log(1 + exp(phi_i)), evaluated in overflow-safe form.
ExpFamModel make_bernoulli_product(int d);

/// Gaussian-with-fixed-covariance family reduced to its quadratic normalizer
/// A(phi) = phi' M phi / 2 with constant Fisher M. M must be symmetric
/// positive definite.
ExpFamModel make_quadratic(const Matrix& m);

/// Domain membership; throws std::invalid_argument on dimension mismatch.
bool in_domain(const ExpFamModel& model, const Vector& phi);

/// Throws std::invalid_argument unless phi has the model's dimension,
/// finite entries, and lies in the model domain.
void require_in_domain(const ExpFamModel& model, const Vector& phi);

}  // namespace bregvi
