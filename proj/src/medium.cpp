#include "pulse/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pulse/errors.hpp"
#include "pulse/optimize.hpp"

namespace pulse {

TorusGrid TorusGrid::make(double t_period, double x_period, int nt, int nx) {
  if (!(t_period > 0.0) || !(x_period > 0.0))
    throw ConfigError("periods must be positive (T=" + std::to_string(t_period) + ", L=" + std::to_string(x_period) + ")");
  if (nt <= 0 || nx <= 0)
    throw ConfigError("grid counts must be positive (nt=" + std::to_string(nt) + ", nx=" + std::to_string(nx) + ")");
  if (nt < 8 || nx < 8)
    throw ConfigError("grid counts must be at least 8 (nt=" + std::to_string(nt) + ", nx=" + std::to_string(nx) + ")");
  return TorusGrid{t_period, x_period, nt, nx};
}

TorusGrid TorusGrid::refined(int levels) const {
  if (levels < 0) throw ConfigError("refinement level must be nonnegative");
  return TorusGrid{t_period, x_period, nt << levels, nx << levels};
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool ScalarField::constant_in_time() const {
  for (int n = 1; n < grid_.nt; ++n)
    for (int i = 0; i < grid_.nx; ++i)
      if ((*this)(n, i) != (*this)(0, i)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Expression Expression::from_config(const Config& cfg, const std::string& prefix, double fallback) {
  const std::string kind = cfg.string_or(prefix + ".kind", "constant");
  Expression e;
  if (kind == "constant") {
    e = constant(cfg.number_or(prefix + ".value", cfg.number_or(prefix + ".mean", fallback)));
    return e;
  }
  if (kind == "sin_x") e.kind = Kind::sin_x;
  else if (kind == "sin_t") e.kind = Kind::sin_t;
  else if (kind == "product") e.kind = Kind::product;
  else throw ConfigError("unknown expression kind '" + kind + "' for " + prefix);
  e.mean = cfg.number_or(prefix + ".mean", fallback);
  e.amp = cfg.number_or(prefix + ".amp", 0.0);
  e.kx = static_cast<int>(cfg.integer_or(prefix + ".kx", 1));
  e.kt = static_cast<int>(cfg.integer_or(prefix + ".kt", 1));
  e.phase = cfg.number_or(prefix + ".phase", 0.0);
  return e;
}

double Expression::eval(double t, double x, double t_period, double x_period) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (kind) {
    case Kind::constant:
      return mean;
    case Kind::sin_x:
      return mean + amp * std::cos(two_pi * kx * x / x_period + phase);
    case Kind::sin_t:
      return mean + amp * std::cos(two_pi * kt * t / t_period + phase);
    case Kind::product:
      return mean + amp * std::cos(two_pi * kx * x / x_period + phase) * std::cos(two_pi * kt * t / t_period);
  }
  return mean;
}

std::string Expression::describe() const {
  switch (kind) {
    case Kind::constant:
      return "constant(" + std::to_string(mean) + ")";
    case Kind::sin_x:
      return "sin_x(mean=" + std::to_string(mean) + ",amp=" + std::to_string(amp) + ",kx=" + std::to_string(kx) + ")";
    case Kind::sin_t:
      return "sin_t(mean=" + std::to_string(mean) + ",amp=" + std::to_string(amp) + ",kt=" + std::to_string(kt) + ")";
    case Kind::product:
      return "product(mean=" + std::to_string(mean) + ",amp=" + std::to_string(amp) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Family family_from_string(const std::string& name) {
  if (name == "homogeneous_logistic") return Family::homogeneous_logistic;
  if (name == "heterogeneous_logistic") return Family::heterogeneous_logistic;
  if (name == "cubic_nonKPP" || name == "cubic_nonkpp") return Family::cubic_nonkpp;
  if (name == "ignition") return Family::ignition;
  throw ConfigError("unknown reaction family '" + name + "'");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::homogeneous_logistic: return "homogeneous_logistic";
    case Family::heterogeneous_logistic: return "heterogeneous_logistic";
    case Family::cubic_nonkpp: return "cubic_nonKPP";
    case Family::ignition: return "ignition";
  }
  return "?";
}

Nonlinearity Nonlinearity::make(Family family, double alpha, double theta_ign) {
  Nonlinearity nl;
  nl.family = family;
  nl.alpha = alpha;
  nl.theta_ign = theta_ign;
  switch (family) {
    case Family::homogeneous_logistic:
    case Family::heterogeneous_logistic:
      // mu*s - f = s^2 for every s.
      nl.rho = 1.0;
      nl.r = 1.0;
      nl.beta_reg = std::numeric_limits<double>::infinity();
      nl.kpp = true;
      break;
    case Family::cubic_nonkpp:
      if (!(alpha > 0.0)) throw ConfigError("cubic_nonKPP requires alpha > 0");
      // mu*s - f = (1-alpha) s^2 + alpha s^3 <= s^2 on [0,1).
      nl.rho = 1.0;
      nl.r = 1.0;
      nl.beta_reg = 1.0;
      nl.kpp = alpha <= 1.0;
      break;
    case Family::ignition:
      if (!(theta_ign > 0.0 && theta_ign < 1.0)) throw ConfigError("ignition requires 0 < theta < 1");
      nl.rho = 1.0;
      nl.r = 1.0;
      nl.beta_reg = 1.0;
      nl.kpp = false;
      break;
  }
  return nl;
}

double Nonlinearity::value(double mu, double s) const {
  switch (family) {
    case Family::homogeneous_logistic:
      return s * (1.0 - s);
    case Family::heterogeneous_logistic:
      return s * (mu - s);
    case Family::cubic_nonkpp:
      return s * (1.0 - s) * (1.0 + alpha * s);
    case Family::ignition:
      return s > theta_ign ? (s - theta_ign) * (1.0 - s) : 0.0;
  }
  return 0.0;
}

double Nonlinearity::derivative(double mu, double s) const {
  switch (family) {
    case Family::homogeneous_logistic:
      return 1.0 - 2.0 * s;
    case Family::heterogeneous_logistic:
      return mu - 2.0 * s;
    case Family::cubic_nonkpp:
      return 1.0 + 2.0 * (alpha - 1.0) * s - 3.0 * alpha * s * s;
    case Family::ignition:
      return s > theta_ign ? 1.0 + theta_ign - 2.0 * s : 0.0;
  }
  return 0.0;
}

double Nonlinearity::intrinsic_growth() const {
  switch (family) {
    case Family::homogeneous_logistic:
    case Family::cubic_nonkpp:
      return 1.0;
    case Family::ignition:
      return 0.0;
    case Family::heterogeneous_logistic:
      break;
  }
  throw ConfigError("heterogeneous_logistic takes its growth rate from the medium");
}

double Nonlinearity::saturation(double max_mu) const {
  if (family == Family::heterogeneous_logistic) return std::max(max_mu, 0.0) + 1.0;
  return 2.0;
}

double Nonlinearity::lipschitz(double min_mu, double max_mu, double s_max) const {
  constexpr int samples = 2048;
  double lip = 0.0;
  for (double mu : {min_mu, max_mu}) {
    for (int k = 0; k <= samples; ++k) {
      const double s = s_max * k / samples;
      lip = std::max(lip, std::abs(derivative(mu, s)));
    }
  }
  return lip;
}

// ---------------------------------------------------------------------------

MediumSpec MediumSpec::from_config(const Config& cfg) {
  MediumSpec spec;
  spec.t_period = cfg.number_or("periods.T", 1.0);
  spec.x_period = cfg.number_or("periods.L", 1.0);
  spec.nt = static_cast<int>(cfg.integer_or("grid.nt", 32));
  spec.nx = static_cast<int>(cfg.integer_or("grid.nx", 32));
  const std::string form = cfg.string_or("form", "divergence");
  if (form == "divergence") spec.form = Form::divergence;
  else if (form == "nondivergence") spec.form = Form::nondivergence;
  else throw ConfigError("form must be \"divergence\" or \"nondivergence\", got '" + form + "'");
  spec.diffusion = Expression::from_config(cfg, "diffusion", 1.0);
  spec.drift = Expression::from_config(cfg, "drift", 0.0);
  const Family family = family_from_string(cfg.string_or("reaction.family", "homogeneous_logistic"));
  spec.reaction = Nonlinearity::make(family, cfg.number_or("reaction.params.alpha", 0.0),
                                     cfg.number_or("reaction.params.theta", 0.0));
  if (family == Family::heterogeneous_logistic)
    spec.growth = Expression::from_config(cfg, "reaction.params.mu", 1.0);
  else
    spec.growth = Expression::constant(spec.reaction.intrinsic_growth());
  spec.direction = static_cast<int>(cfg.integer_or("direction", 1));
  if (spec.direction != 1 && spec.direction != -1) throw ConfigError("direction must be +1 or -1");
  return spec;
}

CoefficientSet CoefficientSet::constant(const TorusGrid& grid, double a, double q, double mu) {
  if (!(a > 0.0)) throw ConfigError("diffusion must be positive (ellipticity)");
  return CoefficientSet{grid, ScalarField(grid, a), ScalarField(grid, q), ScalarField(grid, mu), a, a};
}

CoefficientSet CoefficientSet::with_zero_order(const ScalarField& z) const {
  CoefficientSet out = *this;
  out.mu = z;
  return out;
}

CoefficientSet CoefficientSet::with_drift_negated() const {
  CoefficientSet out = *this;
  for (double& v : out.q.values()) v = -v;
  return out;
}

TorusGrid build_grid(const MediumSpec& spec) {
  return TorusGrid::make(spec.t_period, spec.x_period, spec.nt, spec.nx);
}

ScalarField x_derivative(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  ScalarField d(g);
  const double inv = 1.0 / (2.0 * g.dx());
  for (int n = 0; n < g.nt; ++n)
    for (int i = 0; i < g.nx; ++i) d(n, i) = (f(n, i + 1) - f(n, i - 1)) * inv;
  return d;
}

CoefficientSet sample_coefficients(const MediumSpec& spec, const TorusGrid& grid) {
  auto sample = [&](const Expression& e) {
    ScalarField f(grid);
    for (int n = 0; n < grid.nt; ++n)
      for (int i = 0; i < grid.nx; ++i) f(n, i) = e.eval(grid.t(n), grid.x(i), grid.t_period, grid.x_period);
    return f;
  };
  CoefficientSet c{grid, sample(spec.diffusion), sample(spec.drift), sample(spec.growth), 0.0, 0.0};
  if (!c.a.all_finite() || !c.q.all_finite() || !c.mu.all_finite())
    throw ConfigError("coefficient expressions produced non-finite values");
  c.gamma_ell = c.a.min();
  c.Gamma_ell = c.a.max();
  if (!(c.gamma_ell > 0.0))
    throw ConfigError("ellipticity violated: diffusion minimum is " + std::to_string(c.gamma_ell));
  if (spec.form == Form::nondivergence) {
    const ScalarField da = x_derivative(c.a);
    for (std::size_t k = 0; k < c.q.values().size(); ++k) c.q.values()[k] -= da.values()[k];
  }
  return c;
}

ScalarField evaluate_eta(const Nonlinearity& nl, const CoefficientSet& coeffs, const ScalarField& p, int ns) {
  if (ns < 64) throw ConfigError("evaluate_eta needs ns >= 64");
  const TorusGrid& g = coeffs.grid;
  ScalarField eta(g);
  std::vector<double> s_grid(static_cast<std::size_t>(ns));
  std::vector<double> ratio(static_cast<std::size_t>(ns));
  for (int n = 0; n < g.nt; ++n) {
    for (int i = 0; i < g.nx; ++i) {
      const double mu = coeffs.mu(n, i);
      const double pmax = p(n, i);
      if (!(pmax > 0.0)) throw DomainError("evaluate_eta requires p > 0", {{"p", pmax}, {"t_index", n}, {"x_index", i}});
      const int n_geo = ns / 2;
      const int n_uni = ns - n_geo;
      for (int k = 0; k < n_geo; ++k)
        s_grid[k] = pmax * std::pow(1e-8, 1.0 - double(k) / (n_geo - 1));
      for (int k = 0; k < n_uni; ++k) s_grid[n_geo + k] = pmax * double(k + 1) / n_uni;
      std::sort(s_grid.begin(), s_grid.end());
      auto r = [&](double s) {
        const double v = nl.value(mu, s) / s;
        if (!std::isfinite(v)) throw NumericalError("non-finite reaction sample", {{"s", s}, {"mu", mu}});
        return v;
      };
      std::size_t best = 0;
      for (std::size_t k = 0; k < s_grid.size(); ++k) {
        ratio[k] = r(s_grid[k]);
        if (ratio[k] > ratio[best]) best = k;
      }
      double sup = std::max(ratio[best], mu);
      if (best > 0 && best + 1 < s_grid.size()) {
        auto refined = opt::golden_section([&](double s) { return -r(s); }, s_grid[best - 1], s_grid[best + 1],
                                           1e-12 * pmax);
        sup = std::max(sup, -refined.value);
      }
      eta(n, i) = sup;
    }
  }
  return eta;
}

}  // namespace pulse
