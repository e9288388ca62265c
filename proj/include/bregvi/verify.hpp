#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "bregvi/types.hpp"

namespace bregvi {

/// Central finite-difference gradient of f at phi with step h.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& phi,
                   double h = 1e-5);

/// Central second-order stencil Hessian, symmetrized as (M + M')/2.
Matrix fd_hessian(const std::function<double(const Vector&)>& f, const Vector& phi,
                  double h = 1e-4);

/// Composite Simpson quadrature over [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

/// Extreme eigenvalues of a symmetric matrix. Closed forms for d <= 2,
/// a full symmetric eigensolve otherwise.
std::pair<double, double> eig_extremes(const Matrix& m);

/// Solve M x = b for symmetric positive-definite M via Cholesky.
Vector solve_spd(const Matrix& m, const Vector& b);

/// Counter-based deterministic generator (splitmix64 over seed, index).
/// Identical sequences on every platform for a given seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  double next();  // uniform in [0, 1)
  double next(double lo, double hi);
  Vector vector(int dim, double lo, double hi);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace bregvi
