#include "pulse/floquet.hpp"

#include <algorithm>
#include <cmath>

#include "pulse/errors.hpp"
#include "pulse/tridiag.hpp"

namespace pulse {

void Stencil::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = v[(i + n - 1) % n];
    const double right = v[(i + 1) % n];
    out[i] = lower[i] * left + diag[i] * v[i] + upper[i] * right;
  }
}

Stencil twisted_stencil(const TwistedOperator& op, int time_index) {
  const TorusGrid& g = op.coeffs.grid;
  const int nx = g.nx;
  const double dx = g.dx();
  const double s = op.twist();
  const auto a = op.coeffs.a.slice(time_index);
  const auto q = op.coeffs.q.slice(time_index);
  const auto z = op.zero_order.slice(time_index);
  Stencil st{std::vector<double>(nx), std::vector<double>(nx), std::vector<double>(nx)};
  for (int i = 0; i < nx; ++i) {
    const int im = g.wrap_x(i - 1);
    const int ip = g.wrap_x(i + 1);
    const double a_minus = 0.5 * (a[im] + a[i]);
    const double a_plus = 0.5 * (a[i] + a[ip]);
    const double drift = 2.0 * s * a[i] - q[i];
    const double reaction = s * s * a[i] + s * (a[ip] - a[im]) / (2.0 * dx) + z[i] - s * q[i];
    st.lower[i] = a_minus / (dx * dx) - drift / (2.0 * dx);
    st.upper[i] = a_plus / (dx * dx) + drift / (2.0 * dx);
    st.diag[i] = -(a_minus + a_plus) / (dx * dx) + reaction;
  }
  return st;
}

namespace {

int substeps_for(const Stencil& st, double dt) {
  double rate = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    rate = std::max(rate, -st.diag[i]);                              // explicit half-step stays nonnegative
    rate = std::max(rate, st.lower[i] + st.diag[i] + st.upper[i]);  // implicit half-step stays an M-matrix
  }
  return std::max(1, static_cast<int>(std::ceil(dt * rate / 2.0 * (1.0 + 1e-12))));
}

// Crank-Nicolson over one grid interval, generator interpolated linearly
// between the stencils at its two ends.
class IntervalIntegrator {
public:
  IntervalIntegrator(const Stencil& start, const Stencil& end, double dt, bool frozen)
      : start_(start), end_(end), dt_(dt), frozen_(frozen) {}

  void advance(std::vector<double>& v, int steps) const {
    const double h = dt_ / steps;
    const std::size_t n = v.size();
    std::vector<double> rhs(n);
    Stencil cur = start_;
    if (frozen_) {
      const CyclicTridiagonal solver = implicit_factor(start_, h);
      for (int k = 0; k < steps; ++k) {
        explicit_half(start_, h, v, rhs);
        solver.solve(rhs);
        v.swap(rhs);
      }
      return;
    }
    for (int k = 0; k < steps; ++k) {
      const Stencil next = interpolate(double(k + 1) / steps);
      explicit_half(cur, h, v, rhs);
      implicit_factor(next, h).solve(rhs);
      v.swap(rhs);
      cur = next;
    }
  }

private:
  Stencil interpolate(double theta) const {
    Stencil s = start_;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s.lower[i] += theta * (end_.lower[i] - start_.lower[i]);
      s.diag[i] += theta * (end_.diag[i] - start_.diag[i]);
      s.upper[i] += theta * (end_.upper[i] - start_.upper[i]);
    }
    return s;
  }

  static void explicit_half(const Stencil& st, double h, const std::vector<double>& v, std::vector<double>& out) {
    st.apply(v, out);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] + 0.5 * h * out[i];
  }

  static CyclicTridiagonal implicit_factor(const Stencil& st, double h) {
    const std::size_t n = st.size();
    std::vector<double> lo(n), di(n), up(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = -0.5 * h * st.lower[i];
      di[i] = 1.0 - 0.5 * h * st.diag[i];
      up[i] = -0.5 * h * st.upper[i];
    }
    return CyclicTridiagonal(lo, di, up);
  }

  const Stencil& start_;
  const Stencil& end_;
  double dt_;
  bool frozen_;
};

bool time_independent(const TwistedOperator& op) {
  return op.coeffs.a.constant_in_time() && op.coeffs.q.constant_in_time() && op.zero_order.constant_in_time();
}

}  // namespace

int period_map_substeps(const TwistedOperator& op) {
  const TorusGrid& g = op.coeffs.grid;
  int m = 1;
  for (int n = 0; n < g.nt; ++n) m = std::max(m, substeps_for(twisted_stencil(op, n), g.dt()));
  return m;
}

std::vector<double> apply_period_map(const TwistedOperator& op, std::span<const double> v0,
                                     std::vector<std::vector<double>>* trajectory) {
  const TorusGrid& g = op.coeffs.grid;
  if (v0.size() != std::size_t(g.nx)) throw ConfigError("period map input has the wrong length");
  for (double x : v0)
    if (!std::isfinite(x)) throw NumericalError("period map input is not finite");
  std::vector<Stencil> stencils;
  stencils.reserve(g.nt);
  for (int n = 0; n < g.nt; ++n) stencils.push_back(twisted_stencil(op, n));
  const bool frozen = time_independent(op);
  int m = 1;
  for (const auto& st : stencils) m = std::max(m, substeps_for(st, g.dt()));

  std::vector<double> v(v0.begin(), v0.end());
  std::vector<double> coarse, fine;
  if (trajectory) trajectory->assign(1, v);
  for (int n = 0; n < g.nt; ++n) {
    const IntervalIntegrator step(stencils[n], stencils[(n + 1) % g.nt], g.dt(), frozen);
    coarse = v;
    fine = v;
    step.advance(coarse, m);
    step.advance(fine, 2 * m);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    if (trajectory && n + 1 < g.nt) trajectory->push_back(v);
  }
  return v;
}

EigenPair principal_eigenpair(const TwistedOperator& op, const EigenOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("eigen tolerance must be positive");
  if (!op.zero_order.all_finite()) throw NumericalError("zero-order field is not finite");
  const TorusGrid& g = op.coeffs.grid;
  std::vector<double> v(g.nx, 1.0);
  double rho = 0.0;
  double rho_prev = 0.0;
  double change = 0.0;
  double ratio_gap = 0.0;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= options.max_iters; ++it) {
    std::vector<double> w = apply_period_map(op, v);
    const auto [wmin, wmax] = std::minmax_element(w.begin(), w.end());
    if (!(*wmin > 0.0))
      throw NumericalError("power iterate lost positivity (scheme positivity error)",
                           {{"min_value", *wmin}, {"iteration", double(it)}, {"lambda", op.lambda}});
    rho = *wmax;  // sup-norm ratio, the previous iterate has sup norm 1
    const double scale = 1.0 / *wmax;
    change = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] *= scale;
      change = std::max(change, std::abs(w[i] - v[i]));
    }
    ratio_gap = it > 1 ? std::abs(rho - rho_prev) / rho : 1.0;
    v.swap(w);
    rho_prev = rho;
    if (it > 1 && change < options.tol && ratio_gap < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("power iteration did not converge",
                           {{"ratio_gap", ratio_gap}, {"iterate_change", change}, {"lambda", op.lambda}});

  EigenPair out;
  out.perron_root = rho;
  out.k = -std::log(rho) / g.t_period;
  out.iters = it;
  std::vector<std::vector<double>> traj;
  apply_period_map(op, v, &traj);
  out.psi = ScalarField(g);
  for (int n = 0; n < g.nt; ++n) {
    const double growth = std::exp(out.k * g.t(n));
    for (int i = 0; i < g.nx; ++i) out.psi(n, i) = growth * traj[n][i];
  }
  const double peak = out.psi.max();
  for (double& x : out.psi.values()) x /= peak;
  if (!(out.psi.min() > 0.0))
    throw NumericalError("eigenfunction is not strictly positive", {{"min_psi", out.psi.min()}});
  const ScalarField lpsi = apply_twisted_operator(op, out.psi);
  double res = 0.0;
  for (std::size_t k = 0; k < lpsi.values().size(); ++k)
    res = std::max(res, std::abs(lpsi.values()[k] - out.k * out.psi.values()[k]));
  out.residual = res;
  return out;
}

double generalized_eigenvalue(const CoefficientSet& coeffs) {
  return principal_eigenpair(TwistedOperator::with_mu(coeffs, 0.0)).k;
}

ScalarField apply_twisted_operator(const TwistedOperator& op, const ScalarField& phi) {
  const TorusGrid& g = op.coeffs.grid;
  if (!(phi.grid() == g)) throw ConfigError("field and operator live on different grids");
  ScalarField out(g);
  std::vector<double> mphi(g.nx);
  const double inv2dt = 1.0 / (2.0 * g.dt());
  for (int n = 0; n < g.nt; ++n) {
    twisted_stencil(op, n).apply(phi.slice(n), mphi);
    for (int i = 0; i < g.nx; ++i) out(n, i) = (phi(n + 1, i) - phi(n - 1, i)) * inv2dt - mphi[i];
  }
  return out;
}

RayleighBounds rayleigh_sandwich(const TwistedOperator& op, const ScalarField& phi) {
  if (!(phi.min() > 0.0)) throw DomainError("Rayleigh bounds need a positive test function", {{"min_phi", phi.min()}});
  const ScalarField lphi = apply_twisted_operator(op, phi);
  RayleighBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < lphi.values().size(); ++k) {
    const double r = lphi.values()[k] / phi.values()[k];
    b.low = std::min(b.low, r);
    b.high = std::max(b.high, r);
  }
  return b;
}

}  // namespace pulse
