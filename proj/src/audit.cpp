#include "pulse/audit.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "pulse/dispersion.hpp"
#include "pulse/equilibrium.hpp"
#include "pulse/errors.hpp"
#include "pulse/front.hpp"
#include "pulse/spreading.hpp"

namespace pulse {

bool AuditRow::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

bool AuditResult::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.pass(); });
}

CsvTable AuditResult::pass_matrix() const {
  CsvTable t{{"criterion", "name", "metric", "value", "relation", "threshold", "pass"}, {}};
  for (const AuditRow& r : rows) {
    if (!r.error.empty()) {
      t.rows.push_back({double(r.id), r.name, std::string("error"), std::numeric_limits<double>::quiet_NaN(),
                        std::string("=="), 0.0, std::string("fail")});
      continue;
    }
    for (const AuditCheck& c : r.checks)
      t.rows.push_back(
          {double(r.id), r.name, c.metric, c.value, c.relation, c.threshold, std::string(c.pass ? "pass" : "fail")});
  }
  return t;
}

double dense_monodromy_eigenvalue(const TwistedOperator& op, int fine) {
  const TorusGrid& g = op.coeffs.grid;
  const int nx = g.nx;
  auto dense = [&](int n) {
    const Stencil st = twisted_stencil(op, n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx, nx);
    for (int i = 0; i < nx; ++i) {
      m(i, (i + nx - 1) % nx) += st.lower[i];
      m(i, i) += st.diag[i];
      m(i, (i + 1) % nx) += st.upper[i];
    }
    return m;
  };
  Eigen::MatrixXd monodromy = Eigen::MatrixXd::Identity(nx, nx);
  const double h = g.dt() / fine;
  for (int n = 0; n < g.nt; ++n) {
    const Eigen::MatrixXd m0 = dense(n);
    const Eigen::MatrixXd m1 = dense(n + 1);
    for (int s = 0; s < fine; ++s) {
      const double w = (s + 0.5) / fine;
      const Eigen::MatrixXd gen = (1.0 - w) * m0 + w * m1;
      monodromy = (h * gen).exp() * monodromy;
    }
  }
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(monodromy, false).eigenvalues();
  double rho = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) rho = std::max(rho, std::abs(ev[k]));
  return -std::log(rho) / g.t_period;
}

namespace {

AuditCheck at_most(std::string metric, double value, double threshold) {
  return {std::move(metric), value, threshold, "<=", value <= threshold};
}

AuditCheck at_least(std::string metric, double value, double threshold) {
  return {std::move(metric), value, threshold, ">=", value >= threshold};
}

AuditCheck flag(std::string metric, bool ok) { return {std::move(metric), ok ? 1.0 : 0.0, 1.0, "==", ok}; }

CoefficientSet constant_medium(int nt, int nx, double a, double q, double mu) {
  return CoefficientSet::constant(TorusGrid::make(1.0, 1.0, nt, nx), a, q, mu);
}

// mu = 1 + amp cos(2 pi x) (or the same in t) on a unit torus, a = 1, q = 0.
CoefficientSet sinusoid_medium(int nt, int nx, bool in_time, double amp = 0.5) {
  MediumSpec spec;
  spec.nt = nt;
  spec.nx = nx;
  spec.growth = in_time ? Expression::in_t(1.0, amp) : Expression::in_x(1.0, amp);
  return sample_coefficients(spec, build_grid(spec));
}

CsvTable trace_table(const SpreadingTrace& trace) {
  CsvTable t{{"t", "x_front"}, {}};
  for (std::size_t k = 0; k < trace.times.size(); ++k) t.rows.push_back({trace.times[k], trace.positions[k]});
  return t;
}

struct Context {
  const AuditOptions& options;
  std::map<std::string, CsvTable>& artifacts;
};

AuditRow row_closed_form(Context& ctx) {
  AuditRow row{1, "closed_form_eigenvalues", {}, {}};
  const double a = 1.0, q = 0.5, mu = 1.0;
  const TorusGrid base = TorusGrid::make(1.0, 1.0, 32, 32);
  const CoefficientSet refined = CoefficientSet::constant(base.refined(ctx.options.closed_form_refine), a, q, mu);
  CsvTable t{{"lambda", "k", "exact", "relative_error"}, {}};
  double worst = 0.0;
  for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
    const double k = principal_eigenpair(TwistedOperator::with_mu(refined, lambda)).k;
    const double exact = q * lambda - a * lambda * lambda - mu;
    const double rel = std::abs(k - exact) / std::abs(exact);
    worst = std::max(worst, rel);
    t.rows.push_back({lambda, k, exact, rel});
  }
  ctx.artifacts["closed_form_eigenvalues.csv"] = t;
  row.checks.push_back(at_most("max_relative_error", worst, 1e-6));
  return row;
}

AuditRow row_minimal_speed(Context&) {
  AuditRow row{2, "minimal_speed_closed_form", {}, {}};
  const Dispersion plain = Dispersion::of_mu(constant_medium(32, 32, 1.0, 0.0, 1.0));
  const double c0 = minimal_speed(plain, 0.0).c_star;
  row.checks.push_back(at_most("abs_error_c_star_homogeneous", std::abs(c0 - 2.0), 1e-3));
  const CoefficientSet drift = constant_medium(32, 32, 1.0, 0.5, 1.0);
  const double c_plus = minimal_speed(Dispersion::of_mu(drift, 1), 0.0).c_star;
  const double c_minus = minimal_speed(Dispersion::of_mu(drift, -1), 0.0).c_star;
  row.checks.push_back(at_most("abs_error_c_star_drift_e_plus", std::abs(c_plus - 1.5), 1e-3));
  row.checks.push_back(at_most("abs_error_c_star_drift_e_minus", std::abs(c_minus - 2.5), 1e-3));
  const double c_eps = minimal_speed(plain, 0.25).c_star;
  row.checks.push_back(at_most("abs_error_c_star_eps_0.25", std::abs(c_eps - 2.0 * std::sqrt(1.25)), 1e-3));
  return row;
}

AuditRow row_decay_roots(Context& ctx) {
  AuditRow row{3, "decay_roots", {}, {}};
  const Dispersion disp = Dispersion::of_mu(constant_medium(32, 32, 1.0, 0.0, 1.0));
  const double c = 2.5;
  const RootPair r0 = decay_roots(disp, 0.0, c);
  row.checks.push_back(at_most("abs_error_lam", std::abs(r0.lam - 0.5), 1e-6));
  row.checks.push_back(at_most("abs_error_Lam", std::abs(r0.Lam - 2.0), 1e-6));
  CsvTable t{{"eps", "lam", "Lam"}, {{0.0, r0.lam, r0.Lam}}};
  double prev_lam = std::numeric_limits<double>::infinity(), prev_Lam = prev_lam;
  int violations = 0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const RootPair r = decay_roots(disp, eps, c);
    t.rows.push_back({eps, r.lam, r.Lam});
    const double d_lam = std::abs(r.lam - r0.lam), d_Lam = std::abs(r.Lam - r0.Lam);
    if (!(d_lam < prev_lam) || !(d_Lam < prev_Lam)) ++violations;
    prev_lam = d_lam;
    prev_Lam = d_Lam;
  }
  ctx.artifacts["decay_roots.csv"] = t;
  row.checks.push_back(at_most("eps_sequence_monotonicity_violations", violations, 0.0));
  return row;
}

AuditRow row_oracle(Context& ctx) {
  AuditRow row{4, "dense_monodromy_oracle", {}, {}};
  const CoefficientSet coeffs = sinusoid_medium(16, 16, false);
  CsvTable t{{"lambda", "k_power", "k_dense", "abs_error"}, {}};
  double worst = 0.0;
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const TwistedOperator op = TwistedOperator::with_mu(coeffs, lambda);
    const double k = principal_eigenpair(op).k;
    const double ref = dense_monodromy_eigenvalue(op);
    worst = std::max(worst, std::abs(k - ref));
    t.rows.push_back({lambda, k, ref, std::abs(k - ref)});
  }
  ctx.artifacts["oracle_eigenvalues.csv"] = t;
  row.checks.push_back(at_most("max_abs_error", worst, 1e-6));
  return row;
}

AuditRow row_concavity(Context& ctx) {
  AuditRow row{5, "dispersion_concavity_and_bounds", {}, {}};
  const std::pair<const char*, CoefficientSet> media[] = {
      {"constant", constant_medium(16, 16, 1.0, 0.0, 1.0)},
      {"sinusoid_x", sinusoid_medium(16, 16, false)},
      {"sinusoid_t", sinusoid_medium(16, 16, true)},
  };
  for (const auto& [name, coeffs] : media) {
    const DispersionCurve curve = scan_dispersion(Dispersion::of_mu(coeffs), 0.0, 3.0, 33);
    CsvTable t{{"lambda", "k"}, {}};
    for (std::size_t j = 0; j < curve.lambdas.size(); ++j) t.rows.push_back({curve.lambdas[j], curve.ks[j]});
    ctx.artifacts[std::string("dispersion_") + name + ".csv"] = t;
    row.checks.push_back(at_most(std::string("concavity_defect_") + name, curve.concavity_defect, curve.concavity_tol));
    row.checks.push_back(at_most(std::string("bound_violation_") + name, curve.bound_violation, 0.0));
    row.checks.push_back(at_least(std::string("samples_") + name, double(curve.lambdas.size()), 33.0));
  }
  return row;
}

FrontMedium logistic_front_medium(const AuditOptions& options) {
  const int n = options.front_grid;
  return FrontMedium::build(constant_medium(n, n, 1.0, 0.0, 1.0), Nonlinearity::make(Family::homogeneous_logistic));
}

AuditRow row_front(Context& ctx, const FrontMedium& medium) {
  AuditRow row{6, "front_construction", {}, {}};
  const double c = 2.5, eps = 0.1;
  FrontOptions fo;
  const FrontProfile prof = monotone_iteration(medium, c, eps, ctx.options.front_half_length, fo);
  const RootPair roots = decay_roots(medium.mu_dispersion(), eps, c);
  const ProfileReport rep = profile_diagnostics(prof, prof.sub.psi_lam, roots);
  const CylinderGrid& g = prof.phi.grid();
  double right = 0.0;
  for (int n = 0; n < g.base.nt; ++n)
    for (int i = 0; i < g.base.nx; ++i) right = std::max(right, std::abs(prof.phi(g.nz, n, i) - medium.p(n, i)));
  row.checks.push_back(at_most("outer_monotone_defect", prof.monotone_defect, 1e-10));
  row.checks.push_back(at_most("z_monotone_defect", prof.z_monotone_defect, 1e-8));
  row.checks.push_back(at_most("sandwich_relative_defect", prof.sandwich_relative_defect, fo.sandwich_tol));
  row.checks.push_back(at_most("tail_rate_relative_error_vs_0.5", std::abs(rep.tail_slope - 0.5) / 0.5, 0.05));
  row.checks.push_back(at_most("right_limit_error", right, 1e-4));
  CsvTable t{{"z", "mean_phi", "min_phi", "theta_mean", "zeta_mean"}, {}};
  for (int j = 0; j <= g.nz; ++j) {
    double th = 0.0, ze = 0.0;
    for (int n = 0; n < g.base.nt; ++n)
      for (int i = 0; i < g.base.nx; ++i) {
        th += prof.sub(g.z(j), n, i);
        ze += prof.sup(g.z(j), n, i);
      }
    const double cells = double(g.base.nt) * g.base.nx;
    t.rows.push_back({g.z(j), prof.phi.layer_mean(j), prof.phi.layer_min(j), th / cells, ze / cells});
  }
  ctx.artifacts["front_profile.csv"] = t;
  return row;
}

AuditRow row_sweep(Context& ctx, const FrontMedium& medium) {
  AuditRow row{7, "eps_sweep_cauchy", {}, {}};
  const SweepReport rep = eps_sweep(medium, 2.5, {0.2, 0.1, 0.05}, ctx.options.front_half_length);
  CsvTable t{{"eps", "pin", "l1_to_next", "total_variation", "variation_bound", "max_slope", "slope_bound"}, {}};
  double tv_excess = -std::numeric_limits<double>::infinity(), slope_ratio = 0.0;
  for (std::size_t k = 0; k < rep.eps.size(); ++k) {
    const double l1 = k < rep.l1_distances.size() ? rep.l1_distances[k] : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({rep.eps[k], rep.pins[k], l1, rep.total_variation[k], rep.variation_bound, rep.max_slope[k],
                      rep.slope_bound[k]});
    tv_excess = std::max(tv_excess, rep.total_variation[k] / rep.variation_bound);
    slope_ratio = std::max(slope_ratio, rep.max_slope[k] / rep.slope_bound[k]);
  }
  ctx.artifacts["eps_sweep.csv"] = t;
  row.checks.push_back(flag("l1_distances_strictly_decreasing", rep.cauchy));
  row.checks.push_back(at_most("total_variation_over_bound", tv_excess, 1.0));
  row.checks.push_back(at_most("max_slope_over_bound", slope_ratio, 1.0));
  return row;
}

AuditRow row_contraction(Context& ctx, const FrontMedium& medium) {
  AuditRow row{8, "contraction_certificate", {}, {}};
  const ContractionReport rep =
      contraction_certificate(medium, 2.5, 0.1, ctx.options.front_half_length, 5, ctx.options.seed);
  ctx.artifacts["contraction.csv"] = CsvTable{{"pairs", "beta", "measured", "bound"}, {{5.0, rep.beta, rep.measured, rep.bound}}};
  row.checks.push_back(at_most("measured_factor", rep.measured, rep.bound + 0.01));
  return row;
}

AuditRow row_spreading_kpp(Context& ctx) {
  AuditRow row{9, "spreading_kpp_equality", {}, {}};
  const CoefficientSet coeffs = sinusoid_medium(16, 16, false);
  const Nonlinearity nl = Nonlinearity::make(Family::heterogeneous_logistic);
  const PeriodicState state = compute_equilibrium(coeffs, nl);
  SpreadingAuditOptions so;
  so.periods = ctx.options.spread_periods;
  const SpreadingAudit rep = spreading_audit(coeffs, nl, state.p, 1, so);
  ctx.artifacts["spreading_kpp.csv"] = trace_table(rep.trace);
  row.checks.push_back(at_most("relative_error_c_hat_vs_c_star", rep.kpp_relative_error, so.tolerance));
  row.checks.push_back(flag("speed_sandwich", rep.sandwich_pass));
  row.checks.push_back(flag("below_frame_check_applicable", rep.below_valid));
  row.checks.push_back(at_most("below_frame_distance_to_p", rep.below_distance, so.frame_tol));
  row.checks.push_back(at_most("above_frame_sup", rep.above_sup, so.frame_tol));
  return row;
}

AuditRow row_spreading_cubic(Context& ctx) {
  AuditRow row{10, "spreading_speed_sandwich_nonkpp", {}, {}};
  const CoefficientSet coeffs = constant_medium(16, 16, 1.0, 0.0, 1.0);
  const Nonlinearity nl = Nonlinearity::make(Family::cubic_nonkpp, 8.0);
  const PeriodicState state = compute_equilibrium(coeffs, nl);
  const ScalarField eta = evaluate_eta(nl, coeffs, state.p);
  // Independent scan of f(s)/s on (0, 1] for the homogeneous reaction.
  double scan = nl.derivative(1.0, 0.0);
  constexpr int samples = 1 << 16;
  for (int k = 1; k <= samples; ++k) {
    const double s = double(k) / samples;
    scan = std::max(scan, nl.value(1.0, s) / s);
  }
  SpreadingAuditOptions so;
  so.periods = ctx.options.spread_periods;
  const SpreadingAudit rep = spreading_audit(coeffs, nl, state.p, 1, so);
  ctx.artifacts["spreading_nonkpp.csv"] = trace_table(rep.trace);
  const double lo = 2.0 * 0.95, hi = 3.182 * 1.05;
  row.checks.push_back(at_least("c_hat_lower", rep.c_hat, lo));
  row.checks.push_back(at_most("c_hat_upper", rep.c_hat, hi));
  row.checks.push_back(at_most("eta_max_vs_81/32", std::abs(eta.max() - 81.0 / 32.0), 1e-6));
  row.checks.push_back(at_most("eta_scan_vs_81/32", std::abs(scan - 81.0 / 32.0), 1e-6));
  row.checks.push_back(flag("speed_sandwich", rep.sandwich_pass));
  return row;
}

AuditRow row_equilibrium(Context& ctx) {
  AuditRow row{11, "equilibrium", {}, {}};
  const PeriodicState flat =
      compute_equilibrium(constant_medium(16, 16, 1.0, 0.0, 1.0), Nonlinearity::make(Family::homogeneous_logistic));
  double dev = 0.0;
  for (double v : flat.p.values()) dev = std::max(dev, std::abs(v - 1.0));
  row.checks.push_back(at_most("constant_logistic_sup_error", dev, 1e-9));
  const CoefficientSet coeffs = sinusoid_medium(16, 16, false);
  const Nonlinearity nl = Nonlinearity::make(Family::heterogeneous_logistic);
  const PeriodicState state = compute_equilibrium(coeffs, nl);
  const UniquenessReport u = uniqueness_probe(coeffs, nl, state, 5, ctx.options.seed);
  CsvTable t{{"seed", "level", "distance"}, {}};
  for (std::size_t k = 0; k < u.distances.size(); ++k) {
    const double level = u.seed_levels[k];
    t.rows.push_back({double(k), std::isnan(level) ? CsvTable::Cell(std::string("random")) : CsvTable::Cell(level),
                      u.distances[k]});
  }
  ctx.artifacts["uniqueness_probe.csv"] = t;
  row.checks.push_back(at_most("max_seed_distance", u.max_distance, 1e-6));
  row.checks.push_back(at_most("vanished_seeds", u.vanished, 0.0));
  row.checks.push_back(at_least("positivity_floor", state.positivity_floor, 0.3));
  return row;
}

bool selected(const AuditOptions& options, int id) {
  return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
}

void run_rows(const AuditOptions& options, AuditResult& result, const std::function<void(const AuditRow&)>& on_row) {
  Context ctx{options, result.artifacts};
  auto guarded = [&](int id, const char* name, auto&& body) {
    if (!selected(options, id)) return;
    AuditRow row;
    try {
      row = body();
    } catch (const std::exception& e) {
      row = AuditRow{id, name, {}, e.what()};
    }
    result.rows.push_back(row);
    if (on_row) on_row(row);
  };
  guarded(1, "closed_form_eigenvalues", [&] { return row_closed_form(ctx); });
  guarded(2, "minimal_speed_closed_form", [&] { return row_minimal_speed(ctx); });
  guarded(3, "decay_roots", [&] { return row_decay_roots(ctx); });
  guarded(4, "dense_monodromy_oracle", [&] { return row_oracle(ctx); });
  guarded(5, "dispersion_concavity_and_bounds", [&] { return row_concavity(ctx); });
  const bool needs_front = selected(options, 6) || selected(options, 7) || selected(options, 8);
  std::unique_ptr<FrontMedium> medium;
  if (needs_front) {
    try {
      medium = std::make_unique<FrontMedium>(logistic_front_medium(options));
    } catch (const std::exception&) {
      // Each front row reports the failure on its own.
    }
  }
  auto with_medium = [&](auto&& body) {
    return [&, body]() -> AuditRow {
      if (!medium) return body(logistic_front_medium(options));
      return body(*medium);
    };
  };
  guarded(6, "front_construction", with_medium([&](const FrontMedium& m) { return row_front(ctx, m); }));
  guarded(7, "eps_sweep_cauchy", with_medium([&](const FrontMedium& m) { return row_sweep(ctx, m); }));
  guarded(8, "contraction_certificate", with_medium([&](const FrontMedium& m) { return row_contraction(ctx, m); }));
  guarded(9, "spreading_kpp_equality", [&] { return row_spreading_kpp(ctx); });
  guarded(10, "spreading_speed_sandwich_nonkpp", [&] { return row_spreading_cubic(ctx); });
  guarded(11, "equilibrium", [&] { return row_equilibrium(ctx); });
}

}  // namespace

AuditResult run_audit(const AuditOptions& options, const std::function<void(const AuditRow&)>& on_row) {
  AuditResult result;
  run_rows(options, result, on_row);
  if (options.determinism && selected(options, 12)) {
    AuditRow row{12, "determinism", {}, {}};
    AuditResult again;
    run_rows(options, again, {});
    int differing = 0;
    for (const auto& [name, table] : result.artifacts) {
      const auto it = again.artifacts.find(name);
      if (it == again.artifacts.end() || it->second.render() != table.render()) ++differing;
    }
    if (again.artifacts.size() != result.artifacts.size()) ++differing;
    if (again.pass_matrix().render() != result.pass_matrix().render()) ++differing;
    row.checks.push_back(at_most("differing_csv_files", differing, 0.0));
    row.checks.push_back(at_least("compared_csv_files", double(result.artifacts.size() + 1), 1.0));
    result.rows.push_back(row);
    if (on_row) on_row(row);
  }
  return result;
}

void write_audit(const AuditResult& result, const std::string& out_dir, const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw NumericalError("cannot create output directory " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);
  write_csv((dir / "pass_matrix.csv").string(), result.pass_matrix());
  for (const auto& [name, table] : result.artifacts) write_csv((dir / name).string(), table);
  nlohmann::json rows = nlohmann::json::array();
  for (const AuditRow& r : result.rows) {
    nlohmann::json checks = nlohmann::json::array();
    for (const AuditCheck& c : r.checks)
      checks.push_back({{"metric", c.metric},
                        {"value", c.value},
                        {"relation", c.relation},
                        {"threshold", c.threshold},
                        {"pass", c.pass}});
    nlohmann::json jr = {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass()}, {"checks", checks}};
    if (!r.error.empty()) jr["error"] = r.error;
    rows.push_back(jr);
  }
  nlohmann::json summary = {{"manifest", manifest.to_json()}, {"pass", result.pass()}, {"rows", rows}};
  write_json((dir / "summary.json").string(), summary);
}

}  // namespace pulse
