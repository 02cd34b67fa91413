#pragma once

#include <map>
#include <string>
#include <vector>

#include "pulse/floquet.hpp"

namespace pulse {

enum class ZeroOrder { mu, eta };
std::string to_string(ZeroOrder tag);
ZeroOrder zero_order_from_string(const std::string& name);

/// lambda -> k_{lambda e} for a fixed medium, zero-order field and direction.
/// Eigenvalues are memoized per lambda.
class Dispersion {
public:
  Dispersion(CoefficientSet coeffs, ScalarField zero_order, ZeroOrder tag, int direction = 1);
  /// Dispersion with zero-order term mu.
  static Dispersion of_mu(const CoefficientSet& coeffs, int direction = 1);

  double k(double lambda) const;
  EigenPair eigenpair(double lambda) const;
  TwistedOperator op(double lambda) const;

  const CoefficientSet& coeffs() const { return coeffs_; }
  const ScalarField& zero_order() const { return zero_order_; }
  ZeroOrder tag() const { return tag_; }
  int direction() const { return direction_; }

  /// beta = ||q|| + ||d_x a||, the first-order constant of the growth bounds.
  double beta() const { return beta_; }
  /// Growth bounds -||z|| - beta l - Gamma l^2 <= k_l <= ||z|| + beta l - gamma l^2.
  double lower_bound(double lambda) const;
  double upper_bound(double lambda) const;
  int evaluations() const { return static_cast<int>(cache_.size()); }

private:
  CoefficientSet coeffs_;
  ScalarField zero_order_;
  ZeroOrder tag_;
  int direction_;
  double beta_ = 0.0;
  mutable std::map<double, double> cache_;
};

struct DispersionCurve {
  std::vector<double> lambdas;
  std::vector<double> ks;
  ZeroOrder tag = ZeroOrder::mu;
  double eps = 0.0;
  double concavity_defect = 0.0;  // worst ½(k1+k3) - k2 over midpoint triples
  double concavity_tol = 0.0;
  bool concave = true;
  double bound_violation = 0.0;  // worst excess outside the growth bounds
  bool bounds_ok = true;          // advisory
};

/// Samples k at lambda_max * j / n_samples for j = 1..n_samples and audits
/// midpoint concavity and the growth bounds.
DispersionCurve scan_dispersion(const Dispersion& disp, double eps, double lambda_max, int n_samples);

struct SpeedResult {
  double c_star = 0.0;
  double lambda_star = 0.0;
  double eps = 0.0;
  ZeroOrder tag = ZeroOrder::mu;
  double objective_slope = 0.0;  // central difference of the objective at lambda_star
  double bracket_hi = 0.0;
};

/// c*_eps = min over lambda > 0 of (-k_{lambda e} + eps lambda^2) / lambda.
SpeedResult minimal_speed(const Dispersion& disp, double eps);

struct RootPair {
  double c = 0.0;
  double lam = 0.0;
  double Lam = 0.0;
  double residual = 0.0;  // max |k + lambda c - eps lambda^2| at the two roots
};

/// The two positive roots lam <= Lam of k_{lambda e} + lambda c - eps lambda^2 for c > c*_eps.
RootPair decay_roots(const Dispersion& disp, double eps, double c);
RootPair decay_roots(const Dispersion& disp, double eps, double c, const SpeedResult& speed);

/// alpha(lambda) = k_{lambda e} + lambda c - eps lambda^2.
inline double decay_function(const Dispersion& disp, double eps, double c, double lambda) {
  return disp.k(lambda) + lambda * c - eps * lambda * lambda;
}

}  // namespace pulse
