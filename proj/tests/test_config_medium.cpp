#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pulse/config.hpp"
#include "pulse/equilibrium.hpp"
#include "pulse/errors.hpp"
#include "pulse/medium.hpp"

using namespace pulse;

TEST_CASE("config flattens tables and reads typed values") {
  const Config cfg = Config::parse(R"(
# medium
form = "nondivergence"
[grid]
nt = 16
nx = 24      # trailing comment
[reaction]
family = "cubic_nonKPP"
params.alpha = 8.0
)");
  CHECK(cfg.integer("grid.nt") == 16);
  CHECK(cfg.number("grid.nx") == 24.0);
  CHECK(cfg.string("form") == "nondivergence");
  CHECK(cfg.number("reaction.params.alpha") == 8.0);
  CHECK(cfg.number_or("missing.key", 3.5) == 3.5);
  CHECK(cfg.keys_with_prefix("grid.").size() == 2);
  CHECK_THROWS_AS(cfg.number("form"), ConfigError);
  CHECK_THROWS_AS(cfg.number("absent"), ConfigError);
}

TEST_CASE("config rejects malformed input and accepts overrides") {
  CHECK_THROWS_AS(Config::parse("a = "), ConfigError);
  CHECK_THROWS_AS(Config::parse("a = \"open"), ConfigError);
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2"), ConfigError);
  CHECK_THROWS_AS(Config::parse("just words"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/medium.toml"), ConfigError);
  Config cfg = Config::parse("grid.nt = 8");
  cfg.set("grid.nt", "32");
  CHECK(cfg.integer("grid.nt") == 32);
}

TEST_CASE("grid construction guards counts and periods") {
  const TorusGrid g = TorusGrid::make(1.0, 2.0, 8, 16);
  CHECK(g.dt() == doctest::Approx(0.125));
  CHECK(g.dx() == doctest::Approx(0.125));
  CHECK(g.wrap_x(-1) == 15);
  CHECK(g.wrap_t(8) == 0);
  CHECK(g.refined(2).nx == 64);
  CHECK_THROWS_AS(TorusGrid::make(1.0, 1.0, 0, 32), ConfigError);
  CHECK_THROWS_AS(TorusGrid::make(-1.0, 1.0, 8, 8), ConfigError);
}

TEST_CASE("coefficients are sampled from expressions") {
  const Config cfg = Config::parse(R"(
[grid]
nt = 8
nx = 16
[diffusion]
kind = "sin_x"
mean = 1.0
amp = 0.25
[reaction]
family = "heterogeneous_logistic"
params.mu.kind = "sin_t"
params.mu.mean = 1.0
params.mu.amp = 0.5
)");
  const MediumSpec spec = MediumSpec::from_config(cfg);
  const CoefficientSet c = sample_coefficients(spec, build_grid(spec));
  CHECK(c.a(0, 0) == doctest::Approx(1.25));
  CHECK(c.gamma_ell == doctest::Approx(0.75));
  CHECK(c.Gamma_ell == doctest::Approx(1.25));
  CHECK(c.mu(0, 3) == doctest::Approx(1.5));
  CHECK(c.mu(4, 3) == doctest::Approx(0.5));
  CHECK(c.q.sup_norm() == 0.0);
}

TEST_CASE("nondivergence form moves the diffusion gradient into the drift") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 32;
  spec.diffusion = Expression::in_x(1.0, 0.3);
  spec.form = Form::nondivergence;
  const CoefficientSet c = sample_coefficients(spec, build_grid(spec));
  const ScalarField da = x_derivative(c.a);
  for (int i = 0; i < 32; ++i) CHECK(c.q(0, i) == doctest::Approx(-da(0, i)));
}

TEST_CASE("ellipticity violations are configuration errors") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 16;
  spec.diffusion = Expression::in_x(0.2, 0.5);
  CHECK_THROWS_AS(sample_coefficients(spec, build_grid(spec)), ConfigError);
  CHECK_THROWS_AS(CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 0.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("reaction families") {
  const Nonlinearity logistic = Nonlinearity::make(Family::homogeneous_logistic);
  CHECK(logistic.kpp);
  CHECK(logistic.value(1.0, 0.5) == doctest::Approx(0.25));
  const Nonlinearity cubic = Nonlinearity::make(Family::cubic_nonkpp, 8.0);
  CHECK_FALSE(cubic.kpp);
  CHECK(cubic.derivative(1.0, 0.0) == doctest::Approx(1.0));
  const Nonlinearity het = Nonlinearity::make(Family::heterogeneous_logistic);
  CHECK(het.value(1.5, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(family_from_string("quartic"), ConfigError);
}

TEST_CASE("eta of the cubic reaction peaks at 81/32") {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  const ScalarField p(c.grid, 1.0);
  const ScalarField eta = evaluate_eta(Nonlinearity::make(Family::cubic_nonkpp, 8.0), c, p);
  CHECK(eta.min() == doctest::Approx(81.0 / 32.0).epsilon(1e-12));
  CHECK(eta.max() == doctest::Approx(81.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("eta equals mu for a KPP reaction and is idempotent") {
  MediumSpec spec;
  spec.nt = 8;
  spec.nx = 16;
  spec.growth = Expression::in_x(1.0, 0.5);
  spec.reaction = Nonlinearity::make(Family::heterogeneous_logistic);
  const CoefficientSet c = sample_coefficients(spec, build_grid(spec));
  const PeriodicState state = compute_equilibrium(c, spec.reaction);
  const ScalarField e1 = evaluate_eta(spec.reaction, c, state.p);
  const ScalarField e2 = evaluate_eta(spec.reaction, c, state.p);
  for (std::size_t k = 0; k < e1.values().size(); ++k) {
    CHECK(e1.values()[k] == doctest::Approx(c.mu.values()[k]).epsilon(1e-12));
    CHECK(e1.values()[k] == e2.values()[k]);
  }
}
