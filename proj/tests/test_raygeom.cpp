#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "bregvi/raygeom.hpp"
#include "bregvi/verify.hpp"

using namespace bregvi;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

BregmanObjective bernoulli1() {
  return {make_bernoulli_product(1), scalar(1.0)};
}

BregmanObjective quadratic2() {
  Vector diag(2);
  diag << 0.2, 1.0;
  return {make_quadratic(Matrix(diag.asDiagonal())), Vector::Zero(2)};
}

constexpr double kSigmaPrimeAt1 = 0.19661193324148185;  // sigma'(1) = sigma'(-1)

}  // namespace

TEST_CASE("ray_point interpolation and range check") {
  const Vector a = scalar(1.0), b = scalar(-1.0);
  CHECK(ray_point(a, b, 0.0)[0] == 1.0);
  CHECK(ray_point(a, b, 1.0)[0] == -1.0);
  CHECK(ray_point(a, b, 0.5)[0] == 0.0);
  CHECK_THROWS_AS(ray_point(a, b, 1.5), std::out_of_range);
  CHECK_THROWS_AS(ray_point(a, b, -0.1), std::out_of_range);
}

TEST_CASE("spectral envelope on the two reference rays") {
  const BregmanObjective quad = quadratic2();
  const RayEnvelope eq = spectral_envelope(quad, Vector::Ones(2), 5);
  CHECK(eq.alpha == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(eq.beta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eq.grid_tolerance() == doctest::Approx(0.0));

  const BregmanObjective bern = bernoulli1();
  const RayEnvelope eb = spectral_envelope(bern, scalar(-1.0), 257);
  // Extremizers land exactly on grid nodes: endpoints and phi_s = 0.
  CHECK(eb.alpha == doctest::Approx(kSigmaPrimeAt1).epsilon(1e-12));
  CHECK(eb.beta == doctest::Approx(0.25).epsilon(1e-14));

  const RayEnvelope degenerate = spectral_envelope(bern, scalar(1.0), 3);
  CHECK(degenerate.alpha == doctest::Approx(degenerate.beta));

  CHECK_THROWS_AS(spectral_envelope(bern, scalar(-1.0), 4), std::invalid_argument);
  CHECK_THROWS_AS(spectral_envelope(bern, scalar(-1.0), 1), std::invalid_argument);
}

TEST_CASE("envelope samples include s = 0, 0.5, 1 and respect alpha/beta") {
  const RayEnvelope env = spectral_envelope(bernoulli1(), scalar(4.0), 9);
  bool s0 = false, sh = false, s1 = false;
  for (const RaySample& smp : env.samples) {
    if (smp.s == 0.0) s0 = true;
    if (smp.s == 0.5) sh = true;
    if (smp.s == 1.0) s1 = true;
    CHECK(env.alpha <= smp.lam_min);
    CHECK(env.beta >= smp.lam_max);
  }
  CHECK(s0);
  CHECK(sh);
  CHECK(s1);
}

TEST_CASE("grid refinement is monotone and jumps shrink linearly") {
  const BregmanObjective bern = bernoulli1();
  const Vector phi = scalar(-5.0);
  double prev_alpha = -1.0, prev_beta = 1e300, prev_jump = 1e300;
  for (int grid : {65, 129, 257, 513}) {
    const RayEnvelope env = spectral_envelope(bern, phi, grid);
    if (prev_alpha >= 0.0) {
      CHECK(env.alpha <= prev_alpha);  // refinement never increases alpha
      CHECK(env.beta >= prev_beta);
      CHECK(env.grid_tolerance() <= 0.75 * prev_jump);  // ~halves per doubling
    }
    prev_alpha = env.alpha;
    prev_beta = env.beta;
    prev_jump = env.grid_tolerance();
  }
}

TEST_CASE("integral representation") {
  const BregmanObjective bern = bernoulli1();
  CHECK(integral_neg_elbo(bern, scalar(1.0), 8) == doctest::Approx(0.0));
  CHECK(integral_neg_elbo(bern, scalar(-1.0), 2048) ==
        doctest::Approx(0.4621171572600098).epsilon(1e-8));

  const BregmanObjective quad = quadratic2();
  CounterRng rng(31);
  for (int t = 0; t < 20; ++t) {
    const Vector phi = rng.vector(2, -6.0, 6.0);
    CHECK(integral_neg_elbo(quad, phi, 2) ==
          doctest::Approx(quad.neg_elbo(phi)).epsilon(1e-13));
  }

  // Error decreases monotonically with panel count on Bernoulli rays.
  double prev = 1e300;
  for (int panels : {8, 32, 128, 512, 2048}) {
    const double err =
        std::fabs(integral_neg_elbo(bern, scalar(-4.0), panels) - bern.neg_elbo(scalar(-4.0)));
    CHECK(err <= prev + 1e-13);
    prev = err;
  }
}

TEST_CASE("quadratic bounds sandwich the objective") {
  const BregmanObjective quad = quadratic2();
  const Vector phi = Vector::Ones(2);
  const RayEnvelope env = spectral_envelope(quad, phi, 5);
  const auto [lower, upper] = quadratic_bounds(quad, phi, env);
  CHECK(lower == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(upper == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quad.neg_elbo(phi) == doctest::Approx(0.6).epsilon(1e-14));

  const BregmanObjective bern = bernoulli1();
  const RayEnvelope eb = spectral_envelope(bern, scalar(-1.0), 257);
  const auto [bl, bu] = quadratic_bounds(bern, scalar(-1.0), eb);
  CHECK(bl == doctest::Approx(2.0 * kSigmaPrimeAt1).epsilon(1e-10));
  CHECK(bu == doctest::Approx(0.5).epsilon(1e-12));
  const double L = bern.neg_elbo(scalar(-1.0));
  CHECK(bl <= L);
  CHECK(L <= bu);

  // Envelope computed on a different ray is rejected.
  CHECK_THROWS_AS(quadratic_bounds(bern, scalar(-2.0), eb), std::invalid_argument);
}

TEST_CASE("sandwich holds on random rays for both families") {
  CounterRng rng(37);
  const BregmanObjective bern(make_bernoulli_product(2), rng.vector(2, -2.0, 2.0));
  const BregmanObjective quad = quadratic2();
  for (int t = 0; t < 300; ++t) {
    {
      const Vector phi = rng.vector(2, -6.0, 6.0);
      const RayEnvelope env = spectral_envelope(bern, phi, 257);
      const auto [lo, hi] = quadratic_bounds(bern, phi, env);
      const double L = bern.neg_elbo(phi);
      const double tol = env.grid_tolerance() * (1.0 + std::fabs(L));
      CHECK(lo <= L + tol);
      CHECK(L <= hi + tol);
    }
    {
      const Vector phi = rng.vector(2, -6.0, 6.0);
      const RayEnvelope env = spectral_envelope(quad, phi, 3);
      const auto [lo, hi] = quadratic_bounds(quad, phi, env);
      const double L = quad.neg_elbo(phi);
      CHECK(lo <= L + 1e-12 * (1.0 + std::fabs(L)));
      CHECK(L <= hi + 1e-12 * (1.0 + std::fabs(L)));
    }
  }
}

TEST_CASE("one-point report") {
  const BregmanObjective bern = bernoulli1();
  const RayEnvelope env = spectral_envelope(bern, scalar(-1.0), 257);
  const OnePointReport r = one_point_report(bern, scalar(-1.0), env);
  CHECK(r.inner == doctest::Approx(4.0 * kSigmaPrimeAt1).epsilon(1e-10));
  CHECK(r.delta_sq == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.grad_lower == doctest::Approx(4.0 * kSigmaPrimeAt1).epsilon(1e-10));
  CHECK(r.grad_upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.pl_lower == doctest::Approx(2.0 * env.alpha / env.beta * r.L).epsilon(1e-12));
  CHECK(r.pl_upper == doctest::Approx(2.0 * env.beta / env.alpha * r.L).epsilon(1e-12));
  // Both bound pairs hold.
  CHECK(r.grad_lower <= r.inner + 1e-12);
  CHECK(r.inner <= r.grad_upper + 1e-12);
  const double tol = env.grid_tolerance() * (1.0 + std::fabs(r.inner));
  CHECK(r.pl_lower <= r.inner + tol);
  CHECK(r.inner <= r.pl_upper + tol);

  // Isotropic quadratic: bounds are tight.
  const BregmanObjective iso(make_quadratic(Matrix::Identity(2, 2) * 0.7),
                             Vector::Zero(2));
  const Vector phi = Vector::Ones(2);
  const RayEnvelope eiso = spectral_envelope(iso, phi, 3);
  const OnePointReport ri = one_point_report(iso, phi, eiso);
  CHECK(ri.inner == doctest::Approx(ri.grad_lower).epsilon(1e-14));
  CHECK(ri.inner == doctest::Approx(ri.grad_upper).epsilon(1e-14));
}

TEST_CASE("one-point inequalities on random points") {
  CounterRng rng(41);
  const BregmanObjective bern(make_bernoulli_product(2), rng.vector(2, -2.0, 2.0));
  const BregmanObjective quad = quadratic2();
  for (int t = 0; t < 300; ++t) {
    for (const BregmanObjective* obj : {&bern, &quad}) {
      const Vector phi = rng.vector(2, -6.0, 6.0);
      const RayEnvelope env = spectral_envelope(*obj, phi, obj == &quad ? 3 : 257);
      const OnePointReport r = one_point_report(*obj, phi, env);
      const double scale = 1.0 + std::fabs(r.inner);
      CHECK(r.grad_lower <= r.inner + 1e-12 * scale);
      CHECK(r.inner <= r.grad_upper + 1e-12 * scale);
      const double tol = (env.grid_tolerance() + 1e-12) * scale;
      CHECK(r.pl_lower <= r.inner + tol);
      CHECK(r.inner <= r.pl_upper + tol);
    }
  }
}

TEST_CASE("condition number") {
  RayEnvelope env;
  env.alpha = 0.2;
  env.beta = 1.0;
  CHECK(condition_number(env) == doctest::Approx(5.0));
  env.alpha = env.beta;
  CHECK(condition_number(env) == doctest::Approx(1.0));
  env.alpha = 0.0;
  CHECK_THROWS_AS(condition_number(env), std::invalid_argument);

  const RayEnvelope eb = spectral_envelope(bernoulli1(), scalar(-1.0), 257);
  CHECK(condition_number(eb) == doctest::Approx(0.25 / kSigmaPrimeAt1).epsilon(1e-10));
}
