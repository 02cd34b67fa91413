#include <cmath>

#include "doctest.h"
#include "pulse/errors.hpp"
#include "pulse/front.hpp"

using namespace pulse;

namespace {

FrontMedium constant_logistic() {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  return FrontMedium::build(c, Nonlinearity::make(Family::homogeneous_logistic));
}

}  // namespace

TEST_CASE("cylinder grid keeps the z spacing commensurate with dx") {
  const TorusGrid base = TorusGrid::make(1, 1, 8, 8);
  const CylinderGrid g = CylinderGrid::make(3.0, base, 4);
  CHECK(g.m >= 4);
  CHECK(g.dz() * g.m == doctest::Approx(base.dx()));
  CHECK(g.z(0) == doctest::Approx(-g.half_length));
  CHECK(g.z(g.nz) == doctest::Approx(g.half_length));
  CHECK(g.half_length >= 3.0);
  CHECK(required_z_refinement(base, 2.5, 0.1) >= 1);
}

TEST_CASE("periodic cylinder solve reproduces trivial solutions") {
  const FrontMedium m = constant_logistic();
  const CylinderGrid g = CylinderGrid::make(2.0, m.coeffs.grid, required_z_refinement(m.coeffs.grid, 2.5, 0.1));
  const CylinderOperator op{2.5, 0.1, 3.0, 1, &m.coeffs};
  const PeriodicCylinderSolver solver(g, op);

  const Field3 zero = solver.solve(Field3(g, 0.0), [](int, int, int) { return 0.0; }, nullptr, 1e-13);
  for (double v : zero.values()) CHECK(std::abs(v) < 1e-14);

  // (L + beta) 1 = beta for a constant medium.
  const Field3 one = solver.solve(Field3(g, 3.0), [](int, int, int) { return 1.0; }, nullptr, 1e-13);
  for (double v : one.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(solver.contraction_bound() < 1.0);
}

TEST_CASE("barriers for the constant logistic medium") {
  const FrontMedium m = constant_logistic();
  const double c = 2.5, eps = 0.1;
  const Dispersion d = m.mu_dispersion();
  const RootPair roots = decay_roots(d, eps, c);
  const Subsolution sub = build_subsolution(m, c, eps);
  CHECK(sub.lam == doctest::Approx(roots.lam).epsilon(1e-8));
  CHECK(sub.gamma_gap > 0.0);
  CHECK(sub.lam + sub.gamma_gap < roots.Lam);
  CHECK(sub.alpha_gap > 0.0);
  CHECK(sub.A_amp >= 1.0);
  const Supersolution sup = build_supersolution(m, ZeroOrder::mu, c, eps);
  for (double z : {-4.0, -1.0, 0.0, 2.0})
    CHECK(sub(z, 0, 0) <= sup(z, 0, 0) + 1e-12);
  CHECK(sup(10.0, 0, 0) == doctest::Approx(1.0));

  const CylinderGrid g = CylinderGrid::make(6.0, m.coeffs.grid, required_z_refinement(m.coeffs.grid, c, eps));
  CHECK(subsolution_residual(m, sub, g, c, eps) <= 1e-6);
  CHECK(supersolution_residual(m, sup, g, c, eps) >= -1e-6);
}

TEST_CASE("monotone iteration on a short cylinder") {
  const FrontMedium m = constant_logistic();
  FrontOptions options;
  options.tol = 1e-8;
  const FrontProfile f = monotone_iteration(m, 2.5, 0.1, 6.0, options);
  CHECK(f.monotone_defect <= 1e-6);
  CHECK(f.z_monotone_defect <= 1e-6);
  CHECK(f.sandwich_relative_defect <= options.sandwich_tol);
  const CylinderGrid& g = f.phi.grid();
  CHECK(f.phi.layer_mean(0) < f.phi.layer_mean(g.nz / 2));
  CHECK(f.phi.layer_mean(g.nz / 2) < f.phi.layer_mean(g.nz));
  const double pin = pin_position(f, m.p);
  CHECK(pinned_mean(f, pin, 0.0) == doctest::Approx(0.5).epsilon(1e-6));

  const ContractionReport cr = contraction_certificate(m, 2.5, 0.1, 6.0, 3, 5, options);
  CHECK(cr.ok);
  CHECK(cr.measured <= cr.bound);
}

TEST_CASE("heterogeneous medium converges with a first-step rise at consistency level") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 8;
  spec.diffusion = Expression::in_x(1.0, 0.3);
  spec.drift = Expression::in_t(0.1, 0.2);
  spec.growth = Expression::product(1.0, 0.5);
  spec.reaction = Nonlinearity::make(Family::heterogeneous_logistic);
  const CoefficientSet c = sample_coefficients(spec, build_grid(spec));
  const FrontMedium m = FrontMedium::build(c, spec.reaction);
  FrontOptions options;
  options.tol = 1e-8;
  const FrontProfile f = monotone_iteration(m, 2.5, 0.1, 6.0, options);
  CHECK(f.monotone_relative_defect <= options.monotone_tol);
  CHECK(f.z_monotone_defect <= 1e-8);
  CHECK(f.last_change < 1e-8);
  CHECK(f.phi.layer_mean(f.phi.grid().nz) == doctest::Approx(m.p.mean()).epsilon(1e-6));
}

TEST_CASE("invalid front requests") {
  const FrontMedium m = constant_logistic();
  CHECK_THROWS_AS(monotone_iteration(m, 2.5, 0.0, 6.0), ConfigError);
  CHECK_THROWS_AS(front_path_from_string("fast"), ConfigError);
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  const FrontMedium cubic = FrontMedium::build(c, Nonlinearity::make(Family::cubic_nonkpp, 8.0));
  CHECK_THROWS_AS(monotone_iteration(cubic, 3.5, 0.1, 6.0), ConfigError);
}
