#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "pulse/errors.hpp"
#include "pulse/floquet.hpp"

using namespace pulse;

namespace {

Eigen::MatrixXd dense_generator(const TwistedOperator& op, int n) {
  const Stencil s = twisted_stencil(op, n);
  const int nx = static_cast<int>(s.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx, nx);
  for (int i = 0; i < nx; ++i) {
    m(i, (i + nx - 1) % nx) += s.lower[i];
    m(i, i) += s.diag[i];
    m(i, (i + 1) % nx) += s.upper[i];
  }
  return m;
}

// k from the product of exponentials of the generator, interpolated linearly
// between time levels and frozen at the midpoint of each of `fine` pieces.
double expm_oracle(const TwistedOperator& op, int fine) {
  const TorusGrid& g = op.coeffs.grid;
  Eigen::MatrixXd mono = Eigen::MatrixXd::Identity(g.nx, g.nx);
  for (int n = 0; n < g.nt; ++n) {
    const Eigen::MatrixXd m0 = dense_generator(op, n);
    const Eigen::MatrixXd m1 = dense_generator(op, n + 1);
    const double h = g.dt() / fine;
    for (int s = 0; s < fine; ++s) {
      const double w = (s + 0.5) / fine;
      const Eigen::MatrixXd step = (h * ((1.0 - w) * m0 + w * m1)).exp();
      mono = step * mono;
    }
  }
  const double rho = mono.eigenvalues().cwiseAbs().maxCoeff();
  return -std::log(rho) / g.t_period;
}

CoefficientSet medium(int nt, int nx, const Expression& a, const Expression& q, const Expression& mu) {
  MediumSpec spec;
  spec.nt = nt;
  spec.nx = nx;
  spec.diffusion = a;
  spec.drift = q;
  spec.growth = mu;
  return sample_coefficients(spec, build_grid(spec));
}

}  // namespace

TEST_CASE("constant coefficients give the closed-form eigenvalue") {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 16, 16), 1.0, 0.5, 1.0);
  for (double lambda : {0.0, 0.5, 1.0}) {
    for (int e : {1, -1}) {
      const EigenPair pair = principal_eigenpair(TwistedOperator::with_mu(c, lambda, e));
      const double expected = -lambda * lambda - 1.0 + lambda * e * 0.5;
      CHECK(pair.k == doctest::Approx(expected).epsilon(1e-6));
      CHECK(pair.psi.min() == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(pair.residual < 1e-6);
    }
  }
}

TEST_CASE("period map eigenvalue agrees with a dense exponential oracle") {
  const CoefficientSet c = medium(8, 12, Expression::in_x(1.0, 0.3), Expression::in_t(0.2, 0.3),
                                  Expression::product(0.5, 0.8));
  for (double lambda : {0.0, 0.7}) {
    const TwistedOperator op = TwistedOperator::with_mu(c, lambda, 1);
    const EigenPair pair = principal_eigenpair(op);
    const double oracle = expm_oracle(op, 24);
    CHECK(pair.k == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("eigenfunction is positive, normalized and bracketed by Rayleigh quotients") {
  const CoefficientSet c =
      medium(16, 16, Expression::in_x(1.0, 0.4), Expression::constant(0.0), Expression::product(1.0, 0.7));
  const TwistedOperator op = TwistedOperator::with_mu(c, 0.8, 1);
  const EigenPair pair = principal_eigenpair(op);
  CHECK(pair.psi.min() > 0.0);
  CHECK(pair.psi.max() == doctest::Approx(1.0));
  const RayleighBounds r = rayleigh_sandwich(op, pair.psi);
  CHECK(r.low <= pair.k + 1e-3);
  CHECK(r.high >= pair.k - 1e-3);
  CHECK(r.high - r.low < 0.5);
}

TEST_CASE("sign-changing growth lies between its extremes and its negated mean") {
  const CoefficientSet c = medium(8, 32, Expression::constant(1.0), Expression::constant(0.0),
                                  Expression::in_x(0.5, 1.0));
  const double k0 = generalized_eigenvalue(c);
  CHECK(k0 >= -1.5);
  CHECK(k0 <= -0.5 + 1e-9);
}

TEST_CASE("positivity check rejects a vanishing test function") {
  const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  ScalarField phi(c.grid, 1.0);
  phi(2, 3) = 0.0;
  CHECK_THROWS_AS(rayleigh_sandwich(TwistedOperator::with_mu(c, 0.0), phi), DomainError);
}
