#include "doctest.h"
#include "pulse/equilibrium.hpp"
#include "pulse/errors.hpp"

using namespace pulse;

namespace {

CoefficientSet heterogeneous(double mu_mean, double mu_amp) {
  MediumSpec spec;
  spec.nt = 16;
  spec.nx = 16;
  spec.diffusion = Expression::in_x(1.0, 0.3);
  spec.growth = Expression::product(mu_mean, mu_amp);
  return sample_coefficients(spec, build_grid(spec));
}

}  // namespace

TEST_CASE("homogeneous logistic equilibrium is identically one") {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  const PeriodicState s = compute_equilibrium(c, Nonlinearity::make(Family::homogeneous_logistic));
  CHECK(s.p.min() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.p.max() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.residual < 1e-9);
}

TEST_CASE("cubic reaction stays nonnegative and settles at one") {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  const PeriodicState s = compute_equilibrium(c, Nonlinearity::make(Family::cubic_nonkpp, 8.0));
  CHECK(s.p.min() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.p.max() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("heterogeneous equilibrium is positive and attracts other data") {
  const CoefficientSet c = heterogeneous(1.0, 0.5);
  const Nonlinearity nl = Nonlinearity::make(Family::heterogeneous_logistic);
  const PeriodicState s = compute_equilibrium(c, nl);
  CHECK(s.positivity_floor >= 0.3);
  CHECK(s.p.max() <= c.mu.max() + 1e-9);
  const UniquenessReport u = uniqueness_probe(c, nl, s, 5, 7);
  CHECK(u.unique);
  CHECK(u.max_distance <= 1e-6);
  CHECK(u.distances.size() == 5);
}

TEST_CASE("negative growth has no positive state") {
  const CoefficientSet c = heterogeneous(-1.0, 0.2);
  try {
    compute_equilibrium(c, Nonlinearity::make(Family::heterogeneous_logistic));
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("population vanishes") != std::string::npos);
  }
}
