#include "bregvi/verify.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bregvi {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("non-finite evaluation in ") + what);
  }
}

}  // namespace

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& phi,
                   double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h must be positive");
  Vector g(phi.size());
  Vector x = phi;
  for (int i = 0; i < phi.size(); ++i) {
    x[i] = phi[i] + h;
    const double fp = f(x);
    x[i] = phi[i] - h;
    const double fm = f(x);
    x[i] = phi[i];
    require_finite(fp, "fd_gradient");
    require_finite(fm, "fd_gradient");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian(const std::function<double(const Vector&)>& f, const Vector& phi,
                  double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_hessian: h must be positive");
  const int d = static_cast<int>(phi.size());
  Matrix hess(d, d);
  Vector x = phi;
  const double f0 = f(phi);
  require_finite(f0, "fd_hessian");
  for (int i = 0; i < d; ++i) {
    x[i] = phi[i] + h;
    const double fp = f(x);
    x[i] = phi[i] - h;
    const double fm = f(x);
    x[i] = phi[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      x[i] = phi[i] + h;
      x[j] = phi[j] + h;
      const double fpp = f(x);
      x[j] = phi[j] - h;
      const double fpm = f(x);
      x[i] = phi[i] - h;
      const double fmm = f(x);
      x[j] = phi[j] + h;
      const double fmp = f(x);
      x[i] = phi[i];
      x[j] = phi[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      require_finite(v, "fd_hessian");
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return 0.5 * (hess + hess.transpose()).eval();
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0) {
    throw std::invalid_argument("simpson: panel count must be even and >= 2");
  }
  const double dx = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    const double v = f(a + i * dx);
    require_finite(v, "simpson");
    sum += (i % 2 == 1 ? 4.0 : 2.0) * v;
  }
  return sum * dx / 3.0;
}

std::pair<double, double> eig_extremes(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_extremes: matrix not square");
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale)) {
    throw std::invalid_argument("eig_extremes: matrix not symmetric");
  }
  const int d = static_cast<int>(m.rows());
  if (d == 1) return {m(0, 0), m(0, 0)};
  if (d == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::sqrt(std::fmax(tr * tr / 4.0 - det, 0.0));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eig_extremes: eigensolver failed");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(d - 1)};
}

Vector solve_spd(const Matrix& m, const Vector& b) {
  if (m.rows() != m.cols() || m.rows() != b.size()) {
    throw std::invalid_argument("solve_spd: shape mismatch");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_spd: matrix not positive definite");
  }
  return llt.solve(b);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double CounterRng::next() {
  const std::uint64_t bits = splitmix64(seed_ ^ splitmix64(counter_++));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double CounterRng::next(double lo, double hi) { return lo + (hi - lo) * next(); }

Vector CounterRng::vector(int dim, double lo, double hi) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = next(lo, hi);
  return v;
}

}  // namespace bregvi
