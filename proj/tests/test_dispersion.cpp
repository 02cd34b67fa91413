#include <cmath>

#include "doctest.h"
#include "pulse/dispersion.hpp"
#include "pulse/errors.hpp"

using namespace pulse;

namespace {

CoefficientSet constant_medium(double a, double q, double mu) {
  return CoefficientSet::constant(TorusGrid::make(1, 1, 16, 16), a, q, mu);
}

}  // namespace

TEST_CASE("minimal speed of constant media") {
  const Dispersion plain = Dispersion::of_mu(constant_medium(1.0, 0.0, 1.0));
  CHECK(minimal_speed(plain, 0.0).c_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(minimal_speed(plain, 0.0).lambda_star == doctest::Approx(1.0).epsilon(1e-3));

  const CoefficientSet drifted = constant_medium(1.0, 0.5, 1.0);
  CHECK(minimal_speed(Dispersion::of_mu(drifted, 1), 0.0).c_star == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(minimal_speed(Dispersion::of_mu(drifted, -1), 0.0).c_star == doctest::Approx(2.5).epsilon(1e-6));

  const Dispersion faster = Dispersion::of_mu(constant_medium(1.0, 0.0, 1.25));
  CHECK(minimal_speed(faster, 0.0).c_star == doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-6));
}

TEST_CASE("viscosity raises the minimal speed") {
  const Dispersion d = Dispersion::of_mu(constant_medium(1.0, 0.0, 1.0));
  // (1 + eps) lambda^2 + 1 over lambda is minimized at 2 sqrt(1 + eps).
  CHECK(minimal_speed(d, 0.25).c_star == doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-6));
}

TEST_CASE("decay roots bracket the minimizer") {
  const Dispersion d = Dispersion::of_mu(constant_medium(1.0, 0.0, 1.0));
  const RootPair roots = decay_roots(d, 0.0, 2.5);
  CHECK(roots.lam == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(roots.Lam == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(roots.residual < 1e-8);
  CHECK_THROWS_AS(decay_roots(d, 0.0, 1.0), DomainError);
}

TEST_CASE("reversing the direction only matters through the drift") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 16;
  spec.diffusion = Expression::in_x(1.0, 0.3);
  spec.growth = Expression::product(1.0, 0.5);
  const CoefficientSet even = sample_coefficients(spec, build_grid(spec));
  const double forward = Dispersion::of_mu(even, 1).k(0.8);
  const double backward = Dispersion::of_mu(even, -1).k(0.8);
  CHECK(forward == doctest::Approx(backward).epsilon(1e-8));

  spec.drift = Expression::in_x(0.0, 0.5);
  const CoefficientSet drifted = sample_coefficients(spec, build_grid(spec));
  const double f2 = Dispersion::of_mu(drifted, 1).k(0.8);
  const double b2 = Dispersion::of_mu(drifted, -1).k(0.8);
  CHECK(std::abs(f2 - b2) > 1e-6);
}

TEST_CASE("dispersion curve is concave and within the growth bounds") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 16;
  spec.diffusion = Expression::in_x(1.0, 0.3);
  spec.drift = Expression::in_t(0.1, 0.2);
  spec.growth = Expression::in_x(1.0, 0.5);
  const Dispersion d = Dispersion::of_mu(sample_coefficients(spec, build_grid(spec)));
  const DispersionCurve curve = scan_dispersion(d, 0.0, 2.0, 16);
  CHECK(curve.lambdas.size() == 16);
  CHECK(curve.concave);
  CHECK(curve.bounds_ok);
  for (std::size_t j = 0; j < curve.lambdas.size(); ++j) {
    CHECK(curve.ks[j] >= d.lower_bound(curve.lambdas[j]) - 1e-9);
    CHECK(curve.ks[j] <= d.upper_bound(curve.lambdas[j]) + 1e-9);
  }
}
