#pragma once

#include <span>
#include <vector>

#include "pulse/medium.hpp"

namespace pulse {

/// The lambda-twisted periodic operator
///   L psi = d_t psi - d_x(a d_x psi) - 2 lambda e a d_x psi + q d_x psi
///           - (lambda^2 a + lambda e d_x a + z - lambda e q) psi
/// on the torus, with zero-order field z (mu or eta).
struct TwistedOperator {
  double lambda = 0.0;
  int direction = 1;
  CoefficientSet coeffs;
  ScalarField zero_order;

  static TwistedOperator with_mu(const CoefficientSet& c, double lambda, int direction = 1) {
    return {lambda, direction, c, c.mu};
  }
  /// The twist only ever enters as the product lambda*e.
  double twist() const { return lambda * direction; }
};

/// Rows of the semi-discrete generator M (d_t v = M v) at one time level:
/// (M v)_i = lower_i v_{i-1} + diag_i v_i + upper_i v_{i+1}, indices cyclic.
struct Stencil {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
  void apply(std::span<const double> v, std::span<double> out) const;
};

Stencil twisted_stencil(const TwistedOperator& op, int time_index);

/// CN substeps per grid interval needed to keep both Crank-Nicolson factors
/// nonnegative for this operator.
int period_map_substeps(const TwistedOperator& op);

/// Evolves d_t v = M(t) v over one period from v0 (M linear in time between
/// grid levels). Each grid interval is covered by Crank-Nicolson substeps sized
/// for positivity, with one level of Richardson extrapolation. When
/// `trajectory` is given it receives v at every time level t_0..t_{nt-1}.
std::vector<double> apply_period_map(const TwistedOperator& op, std::span<const double> v0,
                                     std::vector<std::vector<double>>* trajectory = nullptr);

struct EigenPair {
  double k = 0.0;
  ScalarField psi;  // positive, max node value 1
  double residual = 0.0;
  double perron_root = 0.0;
  int iters = 0;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iters = 10000;
};

/// Periodic principal eigenpair by positive power iteration on the period map:
/// k = -ln(rho)/T with rho the Perron root.
EigenPair principal_eigenpair(const TwistedOperator& op, const EigenOptions& options = {});

/// k at lambda = 0 with zero-order term mu: the stability indicator of the zero state.
double generalized_eigenvalue(const CoefficientSet& coeffs);

/// Discrete L phi with a centered time difference.
ScalarField apply_twisted_operator(const TwistedOperator& op, const ScalarField& phi);

struct RayleighBounds {
  double low = 0.0;
  double high = 0.0;
};

/// min and max over nodes of (L phi)/phi for a positive periodic phi.
RayleighBounds rayleigh_sandwich(const TwistedOperator& op, const ScalarField& phi);

}  // namespace pulse
