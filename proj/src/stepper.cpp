#include "pulse/stepper.hpp"

#include <cmath>

#include "pulse/errors.hpp"

namespace pulse {

ImexStepper::ImexStepper(const CoefficientSet& coeffs, const Nonlinearity& nl, int substeps)
    : coeffs_(coeffs), nl_(nl), substeps_(substeps) {
  if (substeps_ < 1) throw ConfigError("substeps must be at least 1");
  const TorusGrid& g = coeffs_.grid;
  levels_.reserve(std::size_t(g.nt) * substeps_);
  torus_solve_.reserve(levels_.capacity());
  for (int n = 0; n < g.nt; ++n)
    for (int k = 0; k < substeps_; ++k) {
      levels_.push_back(level_at(n, k));
      const Level& lv = levels_.back();
      torus_solve_.emplace_back(lv.lower, lv.diag, lv.upper);
    }
}

ImexStepper::Level ImexStepper::level_at(int n, int k) const {
  const TorusGrid& g = coeffs_.grid;
  const int nx = g.nx;
  const double dx = g.dx();
  const double h = step_size();
  const double w_end = double(k + 1) / substeps_;
  const double w_start = double(k) / substeps_;
  auto lerp = [&](const ScalarField& f, int i, double w) { return (1.0 - w) * f(n, i) + w * f(n + 1, i); };
  Level lv{std::vector<double>(nx), std::vector<double>(nx), std::vector<double>(nx), std::vector<double>(nx)};
  for (int i = 0; i < nx; ++i) {
    const double a_m = 0.5 * (lerp(coeffs_.a, i - 1, w_end) + lerp(coeffs_.a, i, w_end));
    const double a_p = 0.5 * (lerp(coeffs_.a, i, w_end) + lerp(coeffs_.a, i + 1, w_end));
    const double q = lerp(coeffs_.q, i, w_end);
    const double lo = a_m / (dx * dx) + q / (2.0 * dx);
    const double up = a_p / (dx * dx) - q / (2.0 * dx);
    if (lo < 0.0 || up < 0.0)
      throw ConfigError("drift too strong for the centered scheme on this grid (cell Peclet number above 1)");
    lv.lower[i] = -h * lo;
    lv.upper[i] = -h * up;
    lv.diag[i] = 1.0 + h * (a_m + a_p) / (dx * dx);
    lv.mu[i] = lerp(coeffs_.mu, i, w_start);
  }
  return lv;
}

void ImexStepper::reaction_step(std::span<double> u, std::span<const double> mu_torus, long offset,
                                bool periodic) const {
  const double h = step_size();
  const long nx = coeffs_.grid.nx;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const long i = periodic ? long(j) : ((long(j) + offset) % nx + nx) % nx;
    u[j] += h * nl_.value(mu_torus[i], u[j]);
  }
}

void ImexStepper::advance_torus(std::vector<double>& u, int n) const {
  const TorusGrid& g = coeffs_.grid;
  if (u.size() != std::size_t(g.nx)) throw ConfigError("torus state has the wrong length");
  const int nn = g.wrap_t(n);
  for (int k = 0; k < substeps_; ++k) {
    const std::size_t idx = std::size_t(nn) * substeps_ + k;
    reaction_step(u, levels_[idx].mu, 0, true);
    torus_solve_[idx].solve(u);
  }
}

void ImexStepper::period_torus(std::vector<double>& u, std::vector<std::vector<double>>* levels) const {
  const TorusGrid& g = coeffs_.grid;
  if (levels) levels->clear();
  for (int n = 0; n < g.nt; ++n) {
    if (levels) levels->push_back(u);
    advance_torus(u, n);
  }
}

void ImexStepper::advance_line(std::vector<double>& u, long offset, int n) const {
  const TorusGrid& g = coeffs_.grid;
  const long nx = g.nx;
  const std::size_t len = u.size();
  if (len < 3) throw ConfigError("line needs at least 3 nodes");
  const int nn = g.wrap_t(n);
  std::vector<double> lo(len), di(len), up(len);
  for (int k = 0; k < substeps_; ++k) {
    const Level& lv = levels_[std::size_t(nn) * substeps_ + k];
    reaction_step(u, lv.mu, offset, false);
    for (std::size_t j = 1; j + 1 < len; ++j) {
      const long i = ((long(j) + offset) % nx + nx) % nx;
      lo[j] = lv.lower[i];
      di[j] = lv.diag[i];
      up[j] = lv.upper[i];
    }
    lo[0] = 0.0;
    di[0] = 1.0;
    up[0] = 0.0;
    lo[len - 1] = 0.0;
    di[len - 1] = 1.0;
    up[len - 1] = 0.0;
    u[0] = 0.0;
    u[len - 1] = 0.0;
    Tridiagonal(lo, di, up).solve(u);
  }
}

}  // namespace pulse
