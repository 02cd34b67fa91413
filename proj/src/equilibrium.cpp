#include "pulse/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pulse/errors.hpp"

namespace pulse {

namespace {

constexpr double vanishing_level = 1e-8;
// A returned orbit peaking below this is the zero state.
constexpr double vanished_state = 1e-6;

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Substeps keeping the explicit reaction update order preserving
// (h |f_u| <= 1) on [0, 2 * saturation], which covers every seed we march from.
int stable_substeps(const CoefficientSet& coeffs, const Nonlinearity& nl, const EquilibriumOptions& options) {
  const double s_max = 2.0 * nl.saturation(coeffs.mu.max());
  const double lip = nl.lipschitz(coeffs.mu.min(), coeffs.mu.max(), s_max);
  const int needed = static_cast<int>(std::ceil(coeffs.grid.dt() * lip - 1e-12));
  return std::max({options.substeps, needed, 1});
}

}  // namespace

ScalarField march_to_periodic(const ImexStepper& stepper, std::vector<double> u, const EquilibriumOptions& options,
                              int* periods_used) {
  const TorusGrid& g = stepper.coeffs().grid;
  std::vector<std::vector<double>> levels;
  double change = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  for (int period = 1; period <= options.max_periods; ++period) {
    const std::vector<double> start = u;
    stepper.period_torus(u, &levels);
    change = sup_distance(start, u);
    const double peak = *std::max_element(u.begin(), u.end());
    if (!std::isfinite(peak)) throw NumericalError("nonlinear march produced non-finite values", {{"period", double(period)}});
    // The returned orbit starts at `start`; its distance to the fixed point under
    // geometric convergence at the observed rate is change / (1 - rate).
    const double rate = std::isfinite(previous) && previous > 0.0 ? change / previous : 1.0;
    const double remaining = rate < 1.0 ? change / (1.0 - rate) : std::numeric_limits<double>::infinity();
    previous = change;
    if ((change < options.tol && remaining < options.tol) || change == 0.0 || peak < vanishing_level) {
      if (periods_used) *periods_used = period;
      ScalarField out(g);
      for (int n = 0; n < g.nt; ++n) std::copy(levels[n].begin(), levels[n].end(), out.slice(n).begin());
      return out;
    }
  }
  throw ConvergenceError("periodic state not reached within max_periods",
                         {{"last_change", change}, {"max_periods", double(options.max_periods)}});
}

PeriodicState compute_equilibrium(const CoefficientSet& coeffs, const Nonlinearity& nl,
                                  const EquilibriumOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("equilibrium tolerance must be positive");
  const ImexStepper stepper(coeffs, nl, stable_substeps(coeffs, nl, options));
  const double start = nl.saturation(coeffs.mu.max());
  PeriodicState state;
  state.p = march_to_periodic(stepper, std::vector<double>(coeffs.grid.nx, start), options, &state.periods);
  if (state.p.max() < vanished_state)
    throw DomainError("population vanishes: no positive periodic state (degeneracy)",
                      {{"max_u", state.p.max()}, {"periods", double(state.periods)}});
  state.positivity_floor = state.p.min();
  if (!(state.positivity_floor > 0.0))
    throw DomainError("periodic state touches zero (degeneracy)", {{"min_p", state.positivity_floor}});
  // Residual of the returned p: one more period started from p(0).
  std::vector<double> u(state.p.slice(0).begin(), state.p.slice(0).end());
  stepper.period_torus(u);
  state.residual = 0.0;
  for (int i = 0; i < coeffs.grid.nx; ++i) state.residual = std::max(state.residual, std::abs(u[i] - state.p(0, i)));
  return state;
}

UniquenessReport uniqueness_probe(const CoefficientSet& coeffs, const Nonlinearity& nl, const PeriodicState& state,
                                  int n_seeds, std::uint64_t seed, const EquilibriumOptions& options) {
  if (n_seeds < 3) throw ConfigError("uniqueness probe needs at least 3 seeds");
  const TorusGrid& g = coeffs.grid;
  const ImexStepper stepper(coeffs, nl, stable_substeps(coeffs, nl, options));
  const double lo = 0.1 * state.p.min();
  const double hi = 2.0 * state.p.max();
  const int n_const = n_seeds - 2;
  std::vector<std::vector<double>> seeds;
  UniquenessReport report;
  for (int s = 0; s < n_const; ++s) {
    const double level = n_const == 1 ? lo : lo * std::pow(hi / lo, double(s) / (n_const - 1));
    seeds.emplace_back(g.nx, level);
    report.seed_levels.push_back(level);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 2; ++s) {
    const double base = lo + (hi - lo) * unit(rng);
    const double amp = 0.5 * std::min(base - 0.5 * lo, hi - base) * unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    std::vector<double> u(g.nx);
    for (int i = 0; i < g.nx; ++i)
      u[i] = base + amp * std::cos(2.0 * std::numbers::pi * (s + 1) * g.x(i) / g.x_period + phase);
    seeds.push_back(std::move(u));
    report.seed_levels.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  for (const auto& u0 : seeds) {
    const ScalarField limit = march_to_periodic(stepper, u0, options);
    if (limit.max() < vanishing_level) {
      ++report.vanished;
      report.distances.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double d = 0.0;
    for (std::size_t k = 0; k < limit.values().size(); ++k)
      d = std::max(d, std::abs(limit.values()[k] - state.p.values()[k]));
    report.distances.push_back(d);
    report.max_distance = std::max(report.max_distance, d);
  }
  report.unique = report.max_distance < 10.0 * std::max(options.tol, state.residual) + 1e-12;
  return report;
}

}  // namespace pulse
