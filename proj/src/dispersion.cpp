#include "pulse/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "pulse/errors.hpp"
#include "pulse/optimize.hpp"

namespace pulse {

std::string to_string(ZeroOrder tag) { return tag == ZeroOrder::mu ? "mu" : "eta"; }

ZeroOrder zero_order_from_string(const std::string& name) {
  if (name == "mu") return ZeroOrder::mu;
  if (name == "eta") return ZeroOrder::eta;
  throw ConfigError("unknown zero-order term '" + name + "' (expected mu or eta)");
}

Dispersion::Dispersion(CoefficientSet coeffs, ScalarField zero_order, ZeroOrder tag, int direction)
    : coeffs_(std::move(coeffs)), zero_order_(std::move(zero_order)), tag_(tag), direction_(direction) {
  if (direction_ != 1 && direction_ != -1) throw ConfigError("direction must be +1 or -1");
  beta_ = coeffs_.q.sup_norm() + x_derivative(coeffs_.a).sup_norm();
}

Dispersion Dispersion::of_mu(const CoefficientSet& coeffs, int direction) {
  return Dispersion(coeffs, coeffs.mu, ZeroOrder::mu, direction);
}

TwistedOperator Dispersion::op(double lambda) const { return {lambda, direction_, coeffs_, zero_order_}; }

EigenPair Dispersion::eigenpair(double lambda) const { return principal_eigenpair(op(lambda)); }

double Dispersion::k(double lambda) const {
  if (auto it = cache_.find(lambda); it != cache_.end()) return it->second;
  const double value = eigenpair(lambda).k;
  cache_.emplace(lambda, value);
  return value;
}

double Dispersion::lower_bound(double lambda) const {
  return -zero_order_.sup_norm() - beta_ * std::abs(lambda) - coeffs_.Gamma_ell * lambda * lambda;
}

double Dispersion::upper_bound(double lambda) const {
  return zero_order_.sup_norm() + beta_ * std::abs(lambda) - coeffs_.gamma_ell * lambda * lambda;
}

DispersionCurve scan_dispersion(const Dispersion& disp, double eps, double lambda_max, int n_samples) {
  if (n_samples < 16) throw ConfigError("scan_dispersion needs at least 16 samples");
  if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
  if (eps < 0.0) throw ConfigError("eps must be nonnegative");
  DispersionCurve curve;
  curve.tag = disp.tag();
  curve.eps = eps;
  double scale = 0.0;
  for (int j = 1; j <= n_samples; ++j) {
    const double lambda = lambda_max * j / n_samples;
    curve.lambdas.push_back(lambda);
    curve.ks.push_back(disp.k(lambda));
    scale = std::max(scale, std::abs(curve.ks.back()));
  }
  curve.concavity_tol = 1e-8 * (1.0 + scale);
  for (std::size_t j = 1; j + 1 < curve.ks.size(); ++j) {
    const double defect = 0.5 * (curve.ks[j - 1] + curve.ks[j + 1]) - curve.ks[j];
    curve.concavity_defect = std::max(curve.concavity_defect, defect);
  }
  curve.concave = curve.concavity_defect <= curve.concavity_tol;
  for (std::size_t j = 0; j < curve.ks.size(); ++j) {
    const double l = curve.lambdas[j];
    const double slack = 1e-8 * (1.0 + std::abs(curve.ks[j]));
    const double excess = std::max(disp.lower_bound(l) - curve.ks[j], curve.ks[j] - disp.upper_bound(l));
    curve.bound_violation = std::max(curve.bound_violation, excess - slack);
  }
  curve.bound_violation = std::max(curve.bound_violation, 0.0);
  curve.bounds_ok = curve.bound_violation == 0.0;
  return curve;
}

namespace {

void require_unstable_zero(const Dispersion& disp) {
  const double k0 = generalized_eigenvalue(disp.coeffs());
  if (!(k0 < 0.0)) throw DomainError("zero state not linearly unstable", {{"lambda1_prime", k0}});
}

// Positive root of (gamma + eps) l^2 - b l - m = 0.
double quadratic_root(double quad, double b, double m) { return (b + std::sqrt(b * b + 4.0 * quad * m)) / (2.0 * quad); }

}  // namespace

SpeedResult minimal_speed(const Dispersion& disp, double eps) {
  if (eps < 0.0) throw ConfigError("eps must be nonnegative");
  require_unstable_zero(disp);
  auto objective = [&](double l) { return (-disp.k(l) + eps * l * l) / l; };
  const double quad = disp.coeffs().gamma_ell + eps;
  const double z_norm = disp.zero_order().sup_norm();
  const double l_ref = std::sqrt(std::max(z_norm, 1e-12) / quad);
  const double h_ref = objective(l_ref);
  // Beyond this point the objective exceeds h_ref by the upper growth bound.
  const double hi = std::max(quadratic_root(quad, disp.beta() + std::max(h_ref, 0.0), z_norm), 2.0 * l_ref);
  const double lo = 1e-4 * hi;
  const auto best = opt::golden_section(objective, lo, hi, 1e-7 * hi);
  SpeedResult out;
  out.c_star = best.value;
  out.lambda_star = best.x;
  out.eps = eps;
  out.tag = disp.tag();
  out.bracket_hi = hi;
  const double h = 1e-4 * best.x;
  out.objective_slope = (objective(best.x + h) - objective(best.x - h)) / (2.0 * h);
  return out;
}

RootPair decay_roots(const Dispersion& disp, double eps, double c) {
  return decay_roots(disp, eps, c, minimal_speed(disp, eps));
}

RootPair decay_roots(const Dispersion& disp, double eps, double c, const SpeedResult& speed) {
  constexpr double speed_tol = 1e-6;
  if (!(c > speed.c_star + 10.0 * speed_tol))
    throw DomainError("subcritical speed", {{"c", c}, {"c_star", speed.c_star}});
  auto g = [&](double l) { return decay_function(disp, eps, c, l); };
  const double l_star = speed.lambda_star;
  const double g_star = g(l_star);
  const double g_zero = g(0.0);
  if (!(g_star > 0.0) || !(g_zero < 0.0))
    throw NumericalError("decay root bracket failure", {{"g_lambda_star", g_star}, {"g_zero", g_zero}});
  const double quad = disp.coeffs().gamma_ell + eps;
  double hi = 1.01 * quadratic_root(quad, disp.beta() + std::abs(c), disp.zero_order().sup_norm()) + 1e-6;
  hi = std::max(hi, 2.0 * l_star);
  double g_hi = g(hi);
  for (int grow = 0; grow < 20 && !(g_hi < 0.0); ++grow) g_hi = g(hi *= 2.0);
  if (!(g_hi < 0.0)) throw NumericalError("decay root bracket failure", {{"lambda_hi", hi}, {"g_hi", g_hi}});
  const double f_tol = 1e-10 * (1.0 + std::abs(c));
  const auto left = opt::bisect(g, 0.0, g_zero, l_star, 1e-13, f_tol);
  const auto right = opt::bisect(g, l_star, g_star, hi, 1e-13, f_tol);
  return {c, left.x, right.x, std::max(std::abs(left.residual), std::abs(right.residual))};
}

}  // namespace pulse
