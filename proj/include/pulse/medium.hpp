#pragma once

#include <span>
#include <string>
#include <vector>

#include "pulse/config.hpp"

namespace pulse {

/// Uniform sampling of the periodicity cell [0,T) x [0,L). Node (n, i) sits at
/// t = n*dt, x = i*dx; both indices wrap.
struct TorusGrid {
  double t_period = 1.0;
  double x_period = 1.0;
  int nt = 0;
  int nx = 0;

  static TorusGrid make(double t_period, double x_period, int nt, int nx);

  double dt() const { return t_period / nt; }
  double dx() const { return x_period / nx; }
  int wrap_t(int n) const { return ((n % nt) + nt) % nt; }
  int wrap_x(int i) const { return ((i % nx) + nx) % nx; }
  double t(int n) const { return n * dt(); }
  double x(int i) const { return i * dx(); }
  std::size_t size() const { return static_cast<std::size_t>(nt) * nx; }
  /// Halves dt and dx `levels` times.
  TorusGrid refined(int levels) const;

  bool operator==(const TorusGrid&) const = default;
};

/// Real values on the torus nodes, stored time-major. Indexing wraps in both axes.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const TorusGrid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}

  const TorusGrid& grid() const { return grid_; }
  double& operator()(int n, int i) { return values_[index(n, i)]; }
  double operator()(int n, int i) const { return values_[index(n, i)]; }
  std::span<double> slice(int n) { return {values_.data() + grid_.wrap_t(n) * grid_.nx, std::size_t(grid_.nx)}; }
  std::span<const double> slice(int n) const {
    return {values_.data() + grid_.wrap_t(n) * grid_.nx, std::size_t(grid_.nx)};
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double min() const;
  double max() const;
  double sup_norm() const;
  double mean() const;
  bool all_finite() const;
  bool constant_in_time() const;

private:
  std::size_t index(int n, int i) const {
    return static_cast<std::size_t>(grid_.wrap_t(n)) * grid_.nx + grid_.wrap_x(i);
  }

  TorusGrid grid_;
  std::vector<double> values_;
};

/// Named coefficient template: mean + amp * X(x) * Y(t) with X, Y cosines of
/// integer wavenumber over the period (or 1 when the factor is absent).
struct Expression {
  enum class Kind { constant, sin_x, sin_t, product };
  Kind kind = Kind::constant;
  double mean = 0.0;
  double amp = 0.0;
  int kx = 1;
  int kt = 1;
  double phase = 0.0;

  static Expression constant(double v) { return {Kind::constant, v, 0.0, 1, 1, 0.0}; }
  static Expression in_x(double mean, double amp, int kx = 1, double phase = 0.0) {
    return {Kind::sin_x, mean, amp, kx, 1, phase};
  }
  static Expression in_t(double mean, double amp, int kt = 1, double phase = 0.0) {
    return {Kind::sin_t, mean, amp, 1, kt, phase};
  }
  static Expression product(double mean, double amp, int kx = 1, int kt = 1, double phase = 0.0) {
    return {Kind::product, mean, amp, kx, kt, phase};
  }
  /// Reads `<prefix>.kind` and its parameters; `<prefix>.value` for constants.
  static Expression from_config(const Config& cfg, const std::string& prefix, double fallback);

  double eval(double t, double x, double t_period, double x_period) const;
  std::string describe() const;
};

enum class Family { homogeneous_logistic, heterogeneous_logistic, cubic_nonkpp, ignition };

Family family_from_string(const std::string& name);
std::string to_string(Family family);

/// Reaction term f(t,x,s). The (t,x) dependence enters only through the local
/// linear growth rate mu(t,x), which callers pass in.
struct Nonlinearity {
  Family family = Family::homogeneous_logistic;
  double alpha = 0.0;      // cubic_nonkpp: f = s(1-s)(1+alpha s)
  double theta_ign = 0.0;  // ignition threshold
  // Growth bound mu*s <= rho*s^(1+r) + f(s) on [0, beta_reg).
  double rho = 1.0;
  double r = 1.0;
  double beta_reg = 1.0;
  bool kpp = true;  // f(s) <= mu*s for all s >= 0

  static Nonlinearity make(Family family, double alpha = 0.0, double theta_ign = 0.0);

  double value(double mu, double s) const;
  double derivative(double mu, double s) const;
  /// f'(0) for the homogeneous families; heterogeneous_logistic takes mu from the medium.
  double intrinsic_growth() const;
  /// Constant initial datum above every positive periodic state.
  double saturation(double max_mu) const;
  /// Upper bound on |f_u| for s in [0, s_max].
  double lipschitz(double min_mu, double max_mu, double s_max) const;
};

enum class Form { divergence, nondivergence };

struct MediumSpec {
  double t_period = 1.0;
  double x_period = 1.0;
  int nt = 32;
  int nx = 32;
  Form form = Form::divergence;
  Expression diffusion = Expression::constant(1.0);
  Expression drift = Expression::constant(0.0);
  Expression growth = Expression::constant(1.0);  // mu for heterogeneous_logistic
  Nonlinearity reaction;
  int direction = 1;

  static MediumSpec from_config(const Config& cfg);
};

/// Diffusion a, drift q and linear growth mu on the torus, with the
/// ellipticity bounds gamma_ell <= a <= Gamma_ell.
struct CoefficientSet {
  TorusGrid grid;
  ScalarField a;
  ScalarField q;
  ScalarField mu;
  double gamma_ell = 0.0;
  double Gamma_ell = 0.0;

  /// Constant-coefficient medium on `grid`.
  static CoefficientSet constant(const TorusGrid& grid, double a, double q, double mu);
  /// Same medium with a different zero-order field.
  CoefficientSet with_zero_order(const ScalarField& z) const;
  /// Same medium with a negated drift.
  CoefficientSet with_drift_negated() const;
};

TorusGrid build_grid(const MediumSpec& spec);
CoefficientSet sample_coefficients(const MediumSpec& spec, const TorusGrid& grid);

/// Centered x-derivative on the torus.
ScalarField x_derivative(const ScalarField& f);

/// eta(t,x) = sup over 0 < s <= p(t,x) of f(t,x,s)/s, including the s -> 0+
/// limit mu. Sampled on a geometric+uniform grid of `ns` points per node and
/// refined by golden-section around the best sample.
ScalarField evaluate_eta(const Nonlinearity& nl, const CoefficientSet& coeffs, const ScalarField& p, int ns = 256);

}  // namespace pulse
