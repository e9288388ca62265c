#include "bregvi/expfam.hpp"

#include <cmath>
#include <stdexcept>

namespace bregvi {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow for large |x|.
double softplus(double x) { return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x))); }

}  // namespace

ExpFamModel make_bernoulli_product(int d) {
  if (d < 1) {
    throw std::invalid_argument("make_bernoulli_product: dimension must be >= 1");
  }
  ExpFamModel model;
  model.dim = d;
  model.log_partition = [](const Vector& phi) {
    double a = 0.0;
    for (int i = 0; i < phi.size(); ++i) a += softplus(phi[i]);
    return a;
  };
  model.mean = [](const Vector& phi) {
    Vector mu(phi.size());
    for (int i = 0; i < phi.size(); ++i) mu[i] = sigmoid(phi[i]);
    return mu;
  };
  model.fisher = [](const Vector& phi) {
    Matrix h = Matrix::Zero(phi.size(), phi.size());
    for (int i = 0; i < phi.size(); ++i) {
      const double s = sigmoid(phi[i]);
      h(i, i) = s * (1.0 - s);
    }
    return h;
  };
  model.domain = [](const Vector& phi) { return phi.allFinite(); };
  return model;
}

ExpFamModel make_quadratic(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("make_quadratic: M must be square and non-empty");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (!((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + scale))) {
    throw std::invalid_argument("make_quadratic: M must be symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("make_quadratic: M must be positive definite");
  }
  ExpFamModel model;
  model.dim = static_cast<int>(m.rows());
  model.log_partition = [m](const Vector& phi) { return 0.5 * phi.dot(m * phi); };
  model.mean = [m](const Vector& phi) { return Vector(m * phi); };
  model.fisher = [m](const Vector&) { return m; };
  model.domain = [](const Vector& phi) { return phi.allFinite(); };
  return model;
}

bool in_domain(const ExpFamModel& model, const Vector& phi) {
  if (phi.size() != model.dim) {
    throw std::invalid_argument("in_domain: parameter dimension mismatch");
  }
  return model.domain(phi);
}

void require_in_domain(const ExpFamModel& model, const Vector& phi) {
  if (!in_domain(model, phi)) {
    throw std::invalid_argument("parameter outside model domain");
  }
}

}  // namespace bregvi
