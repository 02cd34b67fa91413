#include "pulse/spreading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulse/dispersion.hpp"
#include "pulse/errors.hpp"

namespace pulse {

InitialDatum InitialDatum::parse(const std::string& text) {
  InitialDatum d;
  if (text == "step") d.kind = Kind::step;
  else if (text == "bump") d.kind = Kind::bump;
  else if (text == "equilibrium") d.kind = Kind::equilibrium;
  else if (text == "zero") d.kind = Kind::zero;
  else if (text.rfind("exp:", 0) == 0) {
    d.kind = Kind::exp_tail;
    try {
      d.lambda0 = std::stod(text.substr(4));
    } catch (const std::exception&) {
      throw ConfigError("bad exponential datum '" + text + "' (expected exp:<lambda0>)");
    }
    if (!(d.lambda0 > 0.0)) throw ConfigError("exponential datum needs lambda0 > 0");
  } else {
    throw ConfigError("unknown initial datum '" + text + "' (expected step, bump, exp:<lambda0>, equilibrium, zero)");
  }
  return d;
}

std::string InitialDatum::describe() const {
  switch (kind) {
    case Kind::step: return "step";
    case Kind::bump: return "bump";
    case Kind::exp_tail: return "exp:" + std::to_string(lambda0);
    case Kind::equilibrium: return "equilibrium";
    case Kind::zero: return "zero";
  }
  return "";
}

LineGrid LineGrid::make(double half_width, const TorusGrid& base) {
  if (!(half_width > 0.0)) throw ConfigError("line half width must be positive");
  LineGrid g;
  g.dx = base.dx();
  const long half = static_cast<long>(std::ceil(half_width / g.dx));
  g.offset = -half;
  g.n = 2 * half + 1;
  g.half_width = half * g.dx;
  return g;
}

namespace {

long torus_index(long j, long offset, long nx) { return ((j + offset) % nx + nx) % nx; }

double initial_value(const InitialDatum& d, double xi, double p_node, double L) {
  switch (d.kind) {
    case InitialDatum::Kind::step: return xi <= 0.0 ? p_node : 0.0;
    case InitialDatum::Kind::bump: return std::abs(xi) <= (d.half_width > 0.0 ? d.half_width : 2.0 * L) ? p_node : 0.0;
    case InitialDatum::Kind::exp_tail: return p_node * std::min(1.0, std::exp(-d.lambda0 * xi));
    case InitialDatum::Kind::equilibrium: return p_node;
    case InitialDatum::Kind::zero: return 0.0;
  }
  return 0.0;
}

// Largest distance from the origin, along -e (and along +e when both_sides),
// of a node where u >= half of p.
double invaded_extent(const LineRun& run, const std::vector<double>& u, const ScalarField& p, int n, bool both_sides) {
  const long nx = p.grid().nx;
  double extent = 0.0;
  for (long j = 0; j < run.line.n; ++j) {
    const double pv = p(n, int(torus_index(j, run.line.offset, nx)));
    if (!(u[j] >= 0.5 * pv)) continue;
    const double xi = -run.direction * run.line.x(j);
    extent = std::max(extent, both_sides ? std::abs(xi) : xi);
  }
  return extent;
}

}  // namespace

LineRun evolve_line(const CoefficientSet& coeffs, const Nonlinearity& nl, const ScalarField& p, const InitialDatum& u0,
                    int periods, int direction, const EvolveOptions& options) {
  if (periods < 1) throw ConfigError("evolve_line needs at least one period");
  if (direction != 1 && direction != -1) throw ConfigError("direction must be +1 or -1");
  if (!(p.grid() == coeffs.grid)) throw ConfigError("p and coefficients use different grids");
  const TorusGrid& g = coeffs.grid;
  const double t_end = periods * g.t_period;
  double half = options.half_width;
  if (!(half > 0.0)) {
    double bound = options.speed_bound;
    if (!(bound > 0.0)) {
      const ScalarField eta = evaluate_eta(nl, coeffs, p);
      bound = 2.0 * std::sqrt(coeffs.Gamma_ell * std::max(eta.max(), 0.0)) + coeffs.q.sup_norm() +
              x_derivative(coeffs.a).sup_norm();
    }
    half = std::max(20.0 * g.x_period, (bound + 2.0) * t_end);
  }
  LineRun run;
  run.line = LineGrid::make(half, g);
  run.direction = direction;
  const ImexStepper stepper(coeffs, nl, options.substeps);
  std::vector<double> u(run.line.n);
  for (long j = 0; j < run.line.n; ++j) {
    const double pv = p(0, int(torus_index(j, run.line.offset, g.nx)));
    u[j] = u0.scale * initial_value(u0, -direction * run.line.x(j), pv, g.x_period);
  }
  u.front() = 0.0;
  u.back() = 0.0;
  run.snapshots.push_back({0, 0.0, u});
  const int every = std::max(1, options.snapshot_every);
  for (int period = 1; period <= periods; ++period) {
    for (int n = 0; n < g.nt; ++n) stepper.advance_line(u, run.line.offset, n);
    for (double v : u)
      if (!std::isfinite(v)) throw NumericalError("line march produced non-finite values", {{"period", double(period)}});
    if (options.check_containment && u0.kind != InitialDatum::Kind::equilibrium) {
      const double extent = invaded_extent(run, u, p, 0, u0.kind == InitialDatum::Kind::bump);
      if (extent > run.line.half_width - 5.0 * g.x_period)
        throw NumericalError("front within 5 periods of the line end (containment error, enlarge the line)",
                             {{"extent", extent}, {"half_width", run.line.half_width}, {"period", double(period)}});
    }
    if (period % every == 0 || period == periods) run.snapshots.push_back({period, period * g.t_period, u});
  }
  return run;
}

SpreadingTrace track_front(const LineRun& run, const ScalarField& p, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("tracking level must lie in (0, 1)");
  if (run.snapshots.empty()) throw ConfigError("no snapshots to track");
  const long nx = p.grid().nx;
  const int e = run.direction;
  SpreadingTrace trace;
  trace.level = level;
  for (const Snapshot& snap : run.snapshots) {
    const int n = p.grid().wrap_t(int(std::lround(snap.t / p.grid().dt())));
    auto ratio = [&](long j) { return snap.u[j] / p(n, int(torus_index(j, run.line.offset, nx))) - level; };
    // Walk from the far -e end toward +e; the first node at or above the level is the front.
    const long first = e > 0 ? 0 : run.line.n - 1;
    const long step = e > 0 ? 1 : -1;
    long hit = -1;
    for (long j = first; j >= 0 && j < run.line.n; j += step)
      if (ratio(j) >= 0.0) {
        hit = j;
        break;
      }
    if (hit < 0) {
      ++trace.dropped;
      continue;
    }
    double xi = -e * run.line.x(hit);
    if (hit != first) {
      const long prev = hit - step;
      const double r0 = ratio(prev), r1 = ratio(hit);
      const double w = r1 / (r1 - r0);  // fraction of the way back toward prev
      xi += w * run.line.dx;
    }
    trace.times.push_back(snap.t);
    trace.positions.push_back(xi);
  }
  return trace;
}

SpeedEstimate estimate_speed(const SpreadingTrace& trace, double discard_fraction) {
  if (trace.times.empty()) throw NumericalError("insufficient data: empty trace");
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) throw ConfigError("discard fraction must lie in [0, 1)");
  const double t0 = trace.times.front();
  const double t_cut = t0 + discard_fraction * (trace.times.back() - t0);
  double st = 0, sx = 0, stt = 0, stx = 0;
  int k = 0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] < t_cut - 1e-12) continue;
    st += trace.times[i];
    sx += trace.positions[i];
    stt += trace.times[i] * trace.times[i];
    stx += trace.times[i] * trace.positions[i];
    ++k;
  }
  if (k < 10) throw NumericalError("insufficient data: fewer than 10 trace points", {{"points", double(k)}});
  const double tbar = st / k, xbar = sx / k;
  const double sxx = stt - k * tbar * tbar;
  SpeedEstimate est;
  est.c_hat = (stx - k * tbar * xbar) / sxx;
  est.points = k;
  double ssr = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] < t_cut - 1e-12) continue;
    const double r = trace.positions[i] - (xbar + est.c_hat * (trace.times[i] - tbar));
    ssr += r * r;
  }
  est.stderr_ = std::sqrt(ssr / (k - 2) / sxx);
  return est;
}

double frame_distance_to_p(const LineRun& run, const Snapshot& snap, const ScalarField& p, double center,
                           double half) {
  const long nx = p.grid().nx;
  const int n = p.grid().wrap_t(int(std::lround(snap.t / p.grid().dt())));
  double d = 0.0;
  for (long j = 0; j < run.line.n; ++j) {
    const double xi = -run.direction * run.line.x(j);
    if (std::abs(xi - center) > half) continue;
    d = std::max(d, std::abs(snap.u[j] - p(n, int(torus_index(j, run.line.offset, nx)))));
  }
  return d;
}

double frame_sup(const LineRun& run, const Snapshot& snap, double start, double length) {
  double s = 0.0;
  for (long j = 0; j < run.line.n; ++j) {
    const double xi = -run.direction * run.line.x(j);
    if (xi >= start && xi <= start + length) s = std::max(s, snap.u[j]);
  }
  return s;
}

SpreadingAudit spreading_audit(const CoefficientSet& coeffs, const Nonlinearity& nl, const ScalarField& p,
                               int direction, const SpreadingAuditOptions& options) {
  SpreadingAudit rep;
  const ScalarField eta = evaluate_eta(nl, coeffs, p);
  rep.c_mu = minimal_speed(Dispersion(coeffs, coeffs.mu, ZeroOrder::mu, direction), 0.0).c_star;
  rep.c_eta = minimal_speed(Dispersion(coeffs, eta, ZeroOrder::eta, direction), 0.0).c_star;
  rep.c_mu_opposite = minimal_speed(Dispersion(coeffs, coeffs.mu, ZeroOrder::mu, -direction), 0.0).c_star;
  rep.kpp = nl.kpp;

  EvolveOptions ev;
  ev.substeps = options.substeps;
  ev.speed_bound = std::max({rep.c_eta, rep.c_mu_opposite, 0.0});
  const LineRun run = evolve_line(coeffs, nl, p, InitialDatum{}, options.periods, direction, ev);
  rep.trace = track_front(run, p, options.level);
  const SpeedEstimate est = estimate_speed(rep.trace, options.discard_fraction);
  rep.c_hat = est.c_hat;
  rep.stderr_ = est.stderr_;
  rep.sandwich_pass = rep.c_hat >= rep.c_mu * (1.0 - options.tolerance) && rep.c_hat <= rep.c_eta * (1.0 + options.tolerance);
  if (rep.kpp) {
    rep.kpp_relative_error = std::abs(rep.c_hat - rep.c_mu) / rep.c_mu;
    rep.kpp_pass = rep.kpp_relative_error <= options.tolerance;
  }

  // Moving-frame checks on the last quarter of the run.
  const double L = coeffs.grid.x_period;
  rep.below_speed = options.below_factor * rep.c_mu;
  rep.above_speed = options.above_factor * rep.c_eta;
  rep.below_valid = -rep.c_mu_opposite < rep.below_speed && rep.below_speed < rep.c_mu;
  const std::size_t late = run.snapshots.size() - std::max<std::size_t>(1, run.snapshots.size() / 4);
  for (std::size_t k = late; k < run.snapshots.size(); ++k) {
    const Snapshot& s = run.snapshots[k];
    rep.below_distance = std::max(rep.below_distance, frame_distance_to_p(run, s, p, rep.below_speed * s.t, 2.0 * L));
    rep.above_sup = std::max(rep.above_sup, frame_sup(run, s, rep.above_speed * s.t, 4.0 * L));
  }
  rep.below_pass = rep.below_distance <= options.frame_tol;
  rep.above_pass = rep.above_sup <= options.frame_tol;
  return rep;
}

}  // namespace pulse
