#include "pulse/front.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulse/errors.hpp"
#include "pulse/optimize.hpp"

namespace pulse {

FrontMedium FrontMedium::build(const CoefficientSet& coeffs, const Nonlinearity& nl, int direction,
                               const EquilibriumOptions& eq) {
  FrontMedium m{coeffs, nl, {}, {}, direction};
  m.p = compute_equilibrium(coeffs, nl, eq).p;
  m.eta = evaluate_eta(nl, coeffs, m.p);
  return m;
}

double Supersolution::exponential(double z, int n, int i) const { return psi(n, i) * std::exp(lam * (z + shift)); }

double Supersolution::operator()(double z, int n, int i) const { return std::min(p(n, i), exponential(z, n, i)); }

double Subsolution::raw(double z, int n, int i) const {
  const double zs = z + shift;
  return psi_lam(n, i) * std::exp(lam * zs) - A_amp * psi_lam_gamma(n, i) * std::exp((lam + gamma_gap) * zs);
}

double Subsolution::operator()(double z, int n, int i) const { return std::max(raw(z, n, i), 0.0); }

double Subsolution::peak_position() const {
  const TorusGrid& g = psi_lam.grid();
  auto min_theta = [&](double z) {
    double v = std::numeric_limits<double>::infinity();
    for (int n = 0; n < g.nt; ++n)
      for (int i = 0; i < g.nx; ++i) v = std::min(v, raw(z, n, i));
    return v;
  };
  // Nodewise peaks sit at shift-corrected (1/gamma) ln(lam psi / ((lam+gamma) A psi_g)).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < g.nt; ++n)
    for (int i = 0; i < g.nx; ++i) {
      const double zp = std::log(lam * psi_lam(n, i) / ((lam + gamma_gap) * A_amp * psi_lam_gamma(n, i))) / gamma_gap -
                        shift;
      lo = std::min(lo, zp);
      hi = std::max(hi, zp);
    }
  lo -= 1.0 / gamma_gap;
  hi += 1.0 / gamma_gap;
  constexpr int samples = 400;
  double best_z = lo;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= samples; ++k) {
    const double z = lo + (hi - lo) * k / samples;
    const double v = min_theta(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  const double step = (hi - lo) / samples;
  return opt::golden_section([&](double z) { return -min_theta(z); }, best_z - step, best_z + step, 1e-10).x;
}

Supersolution build_supersolution(const FrontMedium& medium, ZeroOrder tag, double c, double eps) {
  const Dispersion disp = medium.dispersion(tag);
  const RootPair roots = decay_roots(disp, eps, c);
  Supersolution sup;
  sup.lam = roots.lam;
  sup.Lam = roots.Lam;
  sup.tag = tag;
  sup.psi = disp.eigenpair(roots.lam).psi;
  sup.p = medium.p;
  return sup;
}

Subsolution build_subsolution(const FrontMedium& medium, double c, double eps) {
  const Dispersion disp = medium.mu_dispersion();
  const RootPair roots = decay_roots(disp, eps, c);
  const Nonlinearity& nl = medium.nl;
  Subsolution sub;
  sub.lam = roots.lam;
  sub.Lam = roots.Lam;
  sub.psi_lam = disp.eigenpair(roots.lam).psi;
  double gamma = std::min(0.5 * (roots.Lam - roots.lam), nl.r * roots.lam);
  for (int attempt = 0;; ++attempt) {
    const EigenPair eg = disp.eigenpair(roots.lam + gamma);
    const double lg = roots.lam + gamma;
    const double alpha = eg.k + lg * c - eps * lg * lg;
    if (alpha > 0.0) {
      sub.gamma_gap = gamma;
      sub.alpha_gap = alpha;
      sub.psi_lam_gamma = eg.psi;
      break;
    }
    if (attempt >= 30)
      throw NumericalError("no admissible gap for the subsolution", {{"gamma", gamma}, {"alpha", alpha}});
    gamma *= 0.5;
  }
  const double lam = sub.lam;
  const double lg = lam + sub.gamma_gap;
  const double cap = std::min(nl.beta_reg, medium.p.min());
  double height = 0.0, growth = 0.0, sign = 0.0;
  const auto& pl = sub.psi_lam.values();
  const auto& pg = sub.psi_lam_gamma.values();
  for (std::size_t k = 0; k < pl.size(); ++k) {
    height = std::max(height, (lam * pl[k] / (lg * pg[k])) *
                                  std::pow(sub.gamma_gap * pl[k] / (lg * cap), sub.gamma_gap / lam));
    growth = std::max(growth, nl.rho * std::pow(pl[k], 1.0 + nl.r) / (sub.alpha_gap * pg[k]));
    sign = std::max(sign, pl[k] / pg[k]);
  }
  sub.A_bounds[0] = height;
  sub.A_bounds[1] = growth;
  sub.A_bounds[2] = sign;
  sub.A_amp = std::max({height, growth, sign});
  return sub;
}

namespace {

CylinderOperator make_operator(const FrontMedium& medium, double c, double eps, double beta) {
  return {c, eps, beta, medium.direction, &medium.coeffs};
}

}  // namespace

double subsolution_residual(const FrontMedium& medium, const Subsolution& sub, const CylinderGrid& grid, double c,
                            double eps) {
  const CylinderOperator op = make_operator(medium, c, eps, 0.0);
  const LatticeFunction theta0 = [&](int j, int n, int i) { return sub.raw(grid.z(j), n, i); };
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 1; j < grid.nz; ++j)
    for (int n = 0; n < grid.base.nt; ++n)
      for (int i = 0; i < grid.base.nx; ++i) {
        const double v = theta0(j, n, i);
        if (!(v > 0.0)) continue;
        const double r = apply_front_operator(grid, op, theta0, j, n, i) - medium.nl.value(medium.coeffs.mu(n, i), v);
        worst = std::max(worst, r);
      }
  return worst;
}

double supersolution_residual(const FrontMedium& medium, const Supersolution& sup, const CylinderGrid& grid, double c,
                              double eps) {
  const CylinderOperator op = make_operator(medium, c, eps, 0.0);
  const LatticeFunction branch = [&](int j, int n, int i) { return sup.exponential(grid.z(j), n, i); };
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 1; j < grid.nz; ++j)
    for (int n = 0; n < grid.base.nt; ++n)
      for (int i = 0; i < grid.base.nx; ++i) {
        const double v = branch(j, n, i);
        if (!(v < medium.p(n, i))) continue;
        const double r = apply_front_operator(grid, op, branch, j, n, i) - medium.nl.value(medium.coeffs.mu(n, i), v);
        worst = std::min(worst, r);
      }
  return worst;
}

FrontPath front_path_from_string(const std::string& name) {
  if (name == "kpp") return FrontPath::kpp;
  if (name == "general") return FrontPath::general;
  throw ConfigError("unknown front path '" + name + "' (expected kpp or general)");
}

std::string to_string(FrontPath path) { return path == FrontPath::kpp ? "kpp" : "general"; }

int required_z_refinement(const TorusGrid& base, double c, double eps) {
  if (!(eps > 0.0)) throw ConfigError("front construction needs eps > 0");
  return std::max(1, static_cast<int>(std::ceil(std::abs(c) * base.dx() / (2.0 * eps) - 1e-12)));
}

double monotone_shift(const FrontMedium& medium) {
  const double half_qx = 0.5 * x_derivative(medium.coeffs.q).sup_norm();
  const double lip = medium.nl.lipschitz(medium.coeffs.mu.min(), medium.coeffs.mu.max(), medium.p.max());
  return half_qx + lip + 1.0;
}

namespace {

struct IterationSetup {
  CylinderGrid grid;
  Supersolution sup;
  Subsolution sub;
  double left_offset = 0.0;  // theta is read at z + left_offset on the left boundary
  bool check_sandwich = true;
};

// Dirichlet data: theta on and beyond the left plane, zeta on and beyond the right.
LatticeFunction boundary_data(const IterationSetup& s) {
  return [&s](int j, int n, int i) {
    const double z = s.grid.z(j);
    return j <= 0 ? s.sub(z + s.left_offset, n, i) : s.sup(z, n, i);
  };
}

FrontProfile iterate(const FrontMedium& medium, double c, double eps, const IterationSetup& s, double tol,
                     const FrontOptions& options) {
  const CylinderGrid& grid = s.grid;
  const TorusGrid& b = grid.base;
  FrontProfile prof;
  prof.c = c;
  prof.eps = eps;
  prof.a = grid.half_length;
  prof.path = options.path;
  prof.beta = monotone_shift(medium);
  prof.sub = s.sub;
  prof.sup = s.sup;
  const PeriodicCylinderSolver solver(grid, make_operator(medium, c, eps, prof.beta));
  const LatticeFunction bc = boundary_data(s);
  Field3 phi = sample(grid, [&](int j, int n, int i) {
    return (j <= 0 || j >= grid.nz) ? bc(j, n, i) : s.sup(grid.z(j), n, i);
  });
  Field3 theta, zeta;
  if (s.check_sandwich) {
    theta = sample(grid, [&](int j, int n, int i) { return s.sub(grid.z(j), n, i); });
    zeta = sample(grid, [&](int j, int n, int i) { return s.sup(grid.z(j), n, i); });
  }
  Field3 rhs(grid);
  for (int it = 1; it <= options.max_outer; ++it) {
    for (int j = 1; j < grid.nz; ++j)
      for (int n = 0; n < b.nt; ++n)
        for (int i = 0; i < b.nx; ++i) {
          const double v = phi(j, n, i);
          rhs(j, n, i) = medium.nl.value(medium.coeffs.mu(n, i), v) + prof.beta * v;
        }
    Field3 next = solver.solve(rhs, bc, &phi, options.inner_tol);
    double change = 0.0, rise = -std::numeric_limits<double>::infinity(), rise_relative = 0.0, sandwich = 0.0,
           relative = 0.0;
    for (int j = 1; j < grid.nz; ++j)
      for (int n = 0; n < b.nt; ++n)
        for (int i = 0; i < b.nx; ++i) {
          const double d = next(j, n, i) - phi(j, n, i);
          change = std::max(change, std::abs(d));
          rise = std::max(rise, d);
          if (d > 0.0 && phi(j, n, i) > 0.0) rise_relative = std::max(rise_relative, d / phi(j, n, i));
          if (s.check_sandwich) {
            const double below = theta(j, n, i) - next(j, n, i);
            const double above = next(j, n, i) - zeta(j, n, i);
            sandwich = std::max({sandwich, below, above});
            if (below > 0.0) relative = std::max(relative, below / theta(j, n, i));
            if (above > 0.0) relative = std::max(relative, above / zeta(j, n, i));
          }
        }
    if (it == 1) prof.first_step_defect = rise;
    prof.monotone_defect = std::max(prof.monotone_defect, std::max(rise, 0.0));
    prof.monotone_relative_defect = std::max(prof.monotone_relative_defect, rise_relative);
    prof.sandwich_defect = std::max(prof.sandwich_defect, sandwich);
    prof.sandwich_relative_defect = std::max(prof.sandwich_relative_defect, relative);
    phi = std::move(next);
    prof.iters = it;
    prof.last_change = change;
    if (prof.monotone_relative_defect > options.monotone_tol)
      throw NumericalError("outer iterates are not nonincreasing (scheme error, grid too coarse)",
                           {{"monotone_defect", prof.monotone_defect},
                            {"monotone_relative_defect", prof.monotone_relative_defect},
                            {"iteration", double(it)}});
    if (prof.sandwich_relative_defect > options.sandwich_tol)
      throw NumericalError("sub/supersolution sandwich violated (scheme error)",
                           {{"sandwich_defect", prof.sandwich_defect},
                            {"sandwich_relative_defect", prof.sandwich_relative_defect},
                            {"iteration", double(it)}});
    if (change < tol) break;
    if (it == options.max_outer)
      throw ConvergenceError("monotone iteration did not converge", {{"last_change", change}, {"iterations", double(it)}});
  }
  for (int j = 0; j < grid.nz; ++j)
    for (int n = 0; n < b.nt; ++n)
      for (int i = 0; i < b.nx; ++i)
        prof.z_monotone_defect = std::max(prof.z_monotone_defect, phi(j, n, i) - phi(j + 1, n, i));
  prof.phi = std::move(phi);
  return prof;
}

CylinderGrid front_grid(const FrontMedium& medium, double c, double eps, double a, const FrontOptions& options) {
  const int m = std::max(options.min_m, required_z_refinement(medium.coeffs.grid, c, eps));
  return CylinderGrid::make(a, medium.coeffs.grid, m);
}

// Layer means of phi, linearly interpolated in z (clamped at the ends).
double layer_mean_at(const FrontProfile& prof, const std::vector<double>& means, double z) {
  const CylinderGrid& g = prof.phi.grid();
  const double x = (z + g.half_length) / g.dz();
  if (x <= 0.0) return means.front();
  if (x >= g.nz) return means.back();
  const int j = std::min(static_cast<int>(x), g.nz - 1);
  const double w = x - j;
  return (1.0 - w) * means[j] + w * means[j + 1];
}

double node_value_at(const FrontProfile& prof, double z, int n, int i) {
  const CylinderGrid& g = prof.phi.grid();
  const double x = (z + g.half_length) / g.dz();
  if (x <= 0.0) return prof.phi(0, n, i);
  if (x >= g.nz) return prof.phi(g.nz, n, i);
  const int j = std::min(static_cast<int>(x), g.nz - 1);
  const double w = x - j;
  return (1.0 - w) * prof.phi(j, n, i) + w * prof.phi(j + 1, n, i);
}

std::vector<double> layer_means(const FrontProfile& prof) {
  std::vector<double> m(prof.phi.grid().nz + 1);
  for (int j = 0; j <= prof.phi.grid().nz; ++j) m[j] = prof.phi.layer_mean(j);
  return m;
}

}  // namespace

FrontProfile monotone_iteration(const FrontMedium& medium, double c, double eps, double a,
                                const FrontOptions& options) {
  if (!(options.tol > 0.0) || !(options.inner_tol > 0.0)) throw ConfigError("front tolerances must be positive");
  IterationSetup s;
  s.grid = front_grid(medium, c, eps, a, options);
  if (options.path == FrontPath::kpp) {
    if (!medium.nl.kpp) throw ConfigError("kpp path needs a KPP nonlinearity (use --path general)");
    s.sup = build_supersolution(medium, ZeroOrder::mu, c, eps);
    s.sub = build_subsolution(medium, c, eps);
    if (!(s.grid.half_length > -s.sub.peak_position()))
      throw ConfigError("cylinder shorter than the subsolution peak distance a0");
    return iterate(medium, c, eps, s, options.tol, options);
  }

  // General path: eta-supersolution shifted by tau, mu-subsolution with its
  // peak moved to z = 0 and read at z + m_a(tau); tau fixed by the pinning.
  s.check_sandwich = false;
  s.sup = build_supersolution(medium, ZeroOrder::eta, c, eps);
  s.sub = build_subsolution(medium, c, eps);
  s.sub.shift = s.sub.peak_position();
  const double a_len = s.grid.half_length;
  const double ratio = s.sup.lam / s.sub.lam;
  // Half the peak height of the shifted subsolution: tau >= 0 keeps phi(0) above
  // that peak and tau -> -inf drives phi to zero, so the level is always bracketed.
  double theta_peak = std::numeric_limits<double>::infinity();
  for (int n = 0; n < s.grid.base.nt; ++n)
    for (int i = 0; i < s.grid.base.nx; ++i) theta_peak = std::min(theta_peak, s.sub(0.0, n, i));
  const double target = 0.5 * theta_peak;
  auto run = [&](double tau, double tol) {
    s.sup.shift = tau;
    s.left_offset = std::min(0.0, ratio * (tau - a_len) + a_len);
    FrontProfile prof = iterate(medium, c, eps, s, tol, options);
    prof.tau = tau;
    return prof;
  };
  auto pin_residual = [&](const FrontProfile& prof) { return layer_mean_at(prof, layer_means(prof), 0.0) - target; };
  const double coarse_tol = std::max(options.tol, 1e-8);
  double lo = -0.5 * a_len, hi = 0.5 * a_len;
  double r_lo = pin_residual(run(lo, coarse_tol));
  double r_hi = pin_residual(run(hi, coarse_tol));
  for (int grow = 0; grow < 4 && r_lo > 0.0; ++grow) r_lo = pin_residual(run(lo -= 0.25 * a_len, coarse_tol));
  for (int grow = 0; grow < 4 && r_hi < 0.0; ++grow) r_hi = pin_residual(run(hi += 0.25 * a_len, coarse_tol));
  if (!(r_lo <= 0.0 && r_hi >= 0.0))
    throw NumericalError("pinning shift not bracketed", {{"residual_lo", r_lo}, {"residual_hi", r_hi}});
  const auto root = opt::bisect([&](double tau) { return pin_residual(run(tau, coarse_tol)); }, lo, r_lo, hi,
                                1e-6 * a_len, options.pin_tol * target, 60);
  return run(root.x, options.tol);
}

ContractionReport contraction_certificate(const FrontMedium& medium, double c, double eps, double a, int pairs,
                                          std::uint64_t seed, const FrontOptions& options) {
  IterationSetup s;
  s.grid = front_grid(medium, c, eps, a, options);
  s.sup = build_supersolution(medium, ZeroOrder::mu, c, eps);
  s.sub = build_subsolution(medium, c, eps);
  ContractionReport rep;
  rep.beta = monotone_shift(medium);
  const PeriodicCylinderSolver solver(s.grid, make_operator(medium, c, eps, rep.beta));
  const LatticeFunction bc = boundary_data(s);
  Field3 rhs = sample(s.grid, [&](int j, int n, int i) {
    const double v = s.sup(s.grid.z(j), n, i);
    return medium.nl.value(medium.coeffs.mu(n, i), v) + rep.beta * v;
  });
  rep.measured = solver.measure_contraction(rhs, bc, pairs, seed, medium.p.max());
  rep.bound = solver.contraction_bound();
  rep.ok = rep.measured <= rep.bound + 0.01;
  return rep;
}

double pin_position(const FrontProfile& profile, const ScalarField& p) {
  const double target = 0.5 * p.mean();
  const std::vector<double> m = layer_means(profile);
  const CylinderGrid& g = profile.phi.grid();
  for (int j = 0; j < g.nz; ++j)
    if (m[j] < target && m[j + 1] >= target) return g.z(j) + g.dz() * (target - m[j]) / (m[j + 1] - m[j]);
  throw NumericalError("profile never crosses half of mean p", {{"min_mean", m.front()}, {"max_mean", m.back()}});
}

double pinned_mean(const FrontProfile& profile, double pin, double s) {
  return layer_mean_at(profile, layer_means(profile), s + pin);
}

namespace {

// sup over the window and the torus of |phi1(pin1 + s) - phi2(pin2 + s)|.
double window_sup_distance(const FrontProfile& p1, double pin1, const FrontProfile& p2, double pin2, double w) {
  const TorusGrid& b = p1.phi.grid().base;
  const double ds = 0.5 * std::min(p1.phi.grid().dz(), p2.phi.grid().dz());
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * w / ds)));
  double d = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double s = -w + 2.0 * w * k / steps;
    for (int n = 0; n < b.nt; ++n)
      for (int i = 0; i < b.nx; ++i)
        d = std::max(d, std::abs(node_value_at(p1, pin1 + s, n, i) - node_value_at(p2, pin2 + s, n, i)));
  }
  return d;
}

// Window L1 distance, integrated in s and averaged over the torus.
double window_l1_distance(const FrontProfile& p1, double pin1, const FrontProfile& p2, double pin2, double w) {
  const TorusGrid& b = p1.phi.grid().base;
  const double ds = 0.5 * std::min(p1.phi.grid().dz(), p2.phi.grid().dz());
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * w / ds)));
  const double h = 2.0 * w / steps;
  double total = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double s = -w + h * k;
    double layer = 0.0;
    for (int n = 0; n < b.nt; ++n)
      for (int i = 0; i < b.nx; ++i)
        layer += std::abs(node_value_at(p1, pin1 + s, n, i) - node_value_at(p2, pin2 + s, n, i));
    layer /= double(b.nt) * b.nx;
    total += (k == 0 || k == steps ? 0.5 : 1.0) * h * layer;
  }
  return total;
}

}  // namespace

ContinuationReport continue_domain(const FrontMedium& medium, double c, double eps, double a_start, double tol_a,
                                   int max_doublings, const FrontOptions& options) {
  ContinuationReport rep;
  double a = a_start;
  FrontProfile prev;
  double prev_pin = 0.0;
  for (int k = 0; k <= max_doublings; ++k, a *= 2.0) {
    FrontProfile prof = monotone_iteration(medium, c, eps, a, options);
    const double pin = pin_position(prof, medium.p);
    if (k == 0) {
      rep.window = std::max(0.5 * std::abs(prof.sub.peak_position()), 2.0 * prof.phi.grid().dz());
    } else {
      const double change = window_sup_distance(prof, pin, prev, prev_pin, rep.window);
      rep.window_changes.push_back(change);
    }
    rep.half_lengths.push_back(prof.a);
    prev = std::move(prof);
    prev_pin = pin;
    if (!rep.window_changes.empty() && rep.window_changes.back() < tol_a) {
      rep.converged = true;
      break;
    }
  }
  const CylinderGrid& g = prev.phi.grid();
  for (int n = 0; n < g.base.nt; ++n)
    for (int i = 0; i < g.base.nx; ++i) {
      rep.right_limit_error = std::max(rep.right_limit_error, std::abs(prev.phi(g.nz, n, i) - medium.p(n, i)));
      rep.left_limit = std::max(rep.left_limit, prev.phi(0, n, i));
    }
  rep.left_limit_bound = 2.0 * std::exp(-prev.sub.lam * g.half_length);
  rep.profile = std::move(prev);
  return rep;
}

SweepReport eps_sweep(const FrontMedium& medium, double c, const std::vector<double>& eps_list, double a,
                      const FrontOptions& options) {
  if (eps_list.size() < 2) throw ConfigError("eps sweep needs at least two values");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1])) throw ConfigError("eps list must be strictly decreasing");
  FrontOptions opts = options;
  for (double e : eps_list) opts.min_m = std::max(opts.min_m, required_z_refinement(medium.coeffs.grid, c, e));
  SweepReport rep;
  rep.eps = eps_list;
  for (double e : eps_list) {
    rep.profiles.push_back(monotone_iteration(medium, c, e, a, opts));
    rep.pins.push_back(pin_position(rep.profiles.back(), medium.p));
  }
  double reach = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.profiles.size(); ++k)
    reach = std::min(reach, rep.profiles[k].a - std::abs(rep.pins[k]));
  rep.window = 0.5 * reach;
  if (!(rep.window > 0.0)) throw NumericalError("pinned profiles leave no common window", {{"reach", reach}});
  for (std::size_t k = 1; k < rep.profiles.size(); ++k) {
    rep.l1_distances.push_back(
        window_l1_distance(rep.profiles[k - 1], rep.pins[k - 1], rep.profiles[k], rep.pins[k], rep.window));
    if (k >= 2 && !(rep.l1_distances[k - 1] < rep.l1_distances[k - 2])) rep.cauchy = false;
  }
  rep.variation_bound = medium.p.mean();
  for (std::size_t k = 0; k < rep.profiles.size(); ++k) {
    const FrontProfile& prof = rep.profiles[k];
    const CylinderGrid& g = prof.phi.grid();
    const TorusGrid& b = g.base;
    const int j_lo = std::max(0, static_cast<int>(std::floor((rep.pins[k] - rep.window + g.half_length) / g.dz())));
    const int j_hi = std::min(g.nz, static_cast<int>(std::ceil((rep.pins[k] + rep.window + g.half_length) / g.dz())));
    double tv = 0.0, slope = 0.0;
    for (int n = 0; n < b.nt; ++n)
      for (int i = 0; i < b.nx; ++i) {
        for (int j = j_lo; j < j_hi; ++j) tv += std::abs(prof.phi(j + 1, n, i) - prof.phi(j, n, i));
        for (int j = 0; j < g.nz; ++j) slope = std::max(slope, (prof.phi(j + 1, n, i) - prof.phi(j, n, i)) / g.dz());
      }
    tv /= double(b.nt) * b.nx;
    rep.total_variation.push_back(tv);
    rep.max_slope.push_back(slope);
    rep.slope_bound.push_back(1.1 * prof.sub.Lam * medium.p.max());
    if (tv > rep.variation_bound * (1.0 + 1e-9)) rep.variation_ok = false;
    if (slope > rep.slope_bound.back()) rep.slope_ok = false;
  }
  return rep;
}

ProfileReport profile_diagnostics(const FrontProfile& profile, const ScalarField& psi_lam, const RootPair& roots) {
  const CylinderGrid& g = profile.phi.grid();
  const TorusGrid& b = g.base;
  const int j_end = g.nz / 4;  // z in [-a, -a/2]
  ProfileReport rep;
  rep.tail_reference = roots.lam;
  double sz = 0.0, sy = 0.0, szz = 0.0, szy = 0.0;
  int count = 0;
  for (int j = 0; j <= j_end; ++j) {
    const double m = profile.phi.layer_mean(j);
    if (!(m > 0.0)) continue;
    const double z = g.z(j), y = std::log(m);
    sz += z;
    sy += y;
    szz += z * z;
    szy += z * y;
    ++count;
  }
  if (count < 2) throw NumericalError("tail window has no positive values");
  rep.tail_slope = (count * szy - sz * sy) / (count * szz - sz * sz);
  rep.tail_relative_error = std::abs(rep.tail_slope - roots.lam) / roots.lam;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0, rsum = 0.0, ld = 0.0;
  int rcount = 0, lcount = 0;
  for (int j = 0; j <= j_end; ++j)
    for (int n = 0; n < b.nt; ++n)
      for (int i = 0; i < b.nx; ++i) {
        const double v = profile.phi(j, n, i);
        const double r = v / (psi_lam(n, i) * std::exp(roots.lam * g.z(j)));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        rsum += r;
        ++rcount;
        if (j >= 1 && v > 0.0) {
          ld += (profile.phi(j + 1, n, i) - profile.phi(j - 1, n, i)) / (2.0 * g.dz() * v);
          ++lcount;
        }
      }
  rep.ratio_flatness = (rmax - rmin) / (rsum / rcount);
  rep.log_derivative = lcount ? ld / lcount : 0.0;
  rep.nearest_root = std::abs(rep.log_derivative - roots.lam) <= std::abs(rep.log_derivative - roots.Lam) ? "lam" : "Lam";
  rep.log_derivative_in_pair = rep.log_derivative >= 0.9 * roots.lam && rep.log_derivative <= 1.1 * roots.Lam;
  rep.monotone_defect = profile.monotone_defect;
  rep.monotone_relative_defect = profile.monotone_relative_defect;
  rep.z_monotone_defect = profile.z_monotone_defect;
  rep.sandwich_defect = profile.sandwich_defect;
  rep.sandwich_relative_defect = profile.sandwich_relative_defect;
  return rep;
}

}  // namespace pulse
