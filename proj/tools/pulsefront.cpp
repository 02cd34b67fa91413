// pulsefront: command-line front end for the pulse library.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pulse/audit.hpp"
#include "pulse/config.hpp"
#include "pulse/dispersion.hpp"
#include "pulse/equilibrium.hpp"
#include "pulse/errors.hpp"
#include "pulse/front.hpp"
#include "pulse/io.hpp"
#include "pulse/spreading.hpp"

namespace fs = std::filesystem;
using namespace pulse;

namespace {

enum Exit { ok = 0, usage = 1, config_error = 2, numerical_error = 3, audit_failure = 4 };

struct Globals {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int refine = 0;
  std::optional<int> direction;
  bool no_field = false;
};

// Flag values that were given on the command line, keyed like config entries.
struct Overrides {
  std::map<std::string, std::string> values;

  template <class T>
  void note(const std::string& key, const std::optional<T>& v) {
    if (!v) return;
    if constexpr (std::is_same_v<T, std::string>) {
      values[key] = "\"" + *v + "\"";
    } else {
      values[key] = format_double(double(*v));
    }
  }
};

class Run {
public:
  Run(const Globals& g, std::string command, const Overrides& overrides) : g_(g), command_(std::move(command)) {
    cfg_ = g.config_path.empty() ? Config{} : Config::load(g.config_path);
    for (const auto& [key, value] : overrides.values) cfg_.set(key, value);
    if (g.direction) cfg_.set("direction", std::to_string(*g.direction));
    if (g.refine < 0) throw ConfigError("--refine must be nonnegative");
    spec_ = MediumSpec::from_config(cfg_);
    spec_.nt <<= g.refine;
    spec_.nx <<= g.refine;
    coeffs_ = sample_coefficients(spec_, build_grid(spec_));
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    if (ec) throw NumericalError("cannot create output directory " + g.out_dir + ": " + ec.message());
  }

  const Config& cfg() const { return cfg_; }
  const MediumSpec& spec() const { return spec_; }
  const CoefficientSet& coeffs() const { return coeffs_; }
  int direction() const { return spec_.direction; }
  bool no_field() const { return g_.no_field; }
  std::uint64_t seed() const { return g_.seed; }

  std::string path(const std::string& name) const { return (fs::path(g_.out_dir) / name).string(); }

  RunManifest manifest() const {
    RunManifest m;
    m.config_path = g_.config_path;
    m.command = command_;
    for (const auto& [key, value] : cfg_.values()) m.parameters[key] = Config::render(value);
    m.parameters["refine"] = std::to_string(g_.refine);
    m.parameters["grid.nt.resolved"] = std::to_string(spec_.nt);
    m.parameters["grid.nx.resolved"] = std::to_string(spec_.nx);
    m.parameters["out"] = g_.out_dir;
    m.seed = g_.seed;
    m.tool_version = tool_version;
    return m;
  }

  void summary(nlohmann::json body) const {
    body["manifest"] = manifest().to_json();
    write_json(path("summary.json"), body);
  }

private:
  Globals g_;
  std::string command_;
  Config cfg_;
  MediumSpec spec_;
  CoefficientSet coeffs_;
};

CsvTable torus_table(const ScalarField& f, const std::string& name) {
  CsvTable t{{"t_index", "x_index", name}, {}};
  const TorusGrid& g = f.grid();
  for (int n = 0; n < g.nt; ++n)
    for (int i = 0; i < g.nx; ++i) t.rows.push_back({double(n), double(i), f(n, i)});
  return t;
}

// The zero-order field for a dispersion query; eta needs the periodic state.
Dispersion make_dispersion(const Run& run, ZeroOrder tag) {
  if (tag == ZeroOrder::mu) return Dispersion(run.coeffs(), run.coeffs().mu, tag, run.direction());
  const PeriodicState state = compute_equilibrium(run.coeffs(), run.spec().reaction);
  return Dispersion(run.coeffs(), evaluate_eta(run.spec().reaction, run.coeffs(), state.p), tag, run.direction());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsating fronts in space-time periodic reaction-advection-diffusion media"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "medium configuration file (TOML)");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "seed for randomized probes");
  app.add_option("--refine", g.refine, "halve dt, dx and dz this many times");
  app.add_option("--direction", g.direction, "propagation direction e (+1 or -1)");
  app.add_flag("--no-field", g.no_field, "skip field CSV dumps");

  Overrides ov;
  std::function<int()> action;

  // eigen
  auto* eigen = app.add_subcommand("eigen", "principal eigenvalue k_lambda and eigenfunction");
  std::optional<double> e_lambda;
  std::optional<std::string> e_zero;
  eigen->add_option("--lambda", e_lambda, "twist lambda");
  eigen->add_option("--zero-order", e_zero, "mu or eta");
  eigen->callback([&] {
    ov.note("eigen.lambda", e_lambda);
    ov.note("eigen.zero_order", e_zero);
    action = [&] {
      const Run run(g, "eigen", ov);
      const double lambda = run.cfg().number_or("eigen.lambda", 0.0);
      const ZeroOrder tag = zero_order_from_string(run.cfg().string_or("eigen.zero_order", "mu"));
      const Dispersion disp = make_dispersion(run, tag);
      const EigenPair e = disp.eigenpair(lambda);
      if (!run.no_field()) write_csv(run.path("psi.csv"), torus_table(e.psi, "psi"));
      run.summary({{"lambda", lambda}, {"zero_order", to_string(tag)}, {"k", e.k}, {"residual", e.residual},
                   {"iters", e.iters}});
      return int(ok);
    };
  });

  // dispersion
  auto* disp_cmd = app.add_subcommand("dispersion", "sampled dispersion curve lambda -> k");
  std::optional<double> d_lmax, d_eps;
  std::optional<int> d_n;
  std::optional<std::string> d_zero;
  disp_cmd->add_option("--lmax", d_lmax, "largest lambda");
  disp_cmd->add_option("--n", d_n, "number of samples");
  disp_cmd->add_option("--eps", d_eps, "regularization used by the concavity audit");
  disp_cmd->add_option("--zero-order", d_zero, "mu or eta");
  disp_cmd->callback([&] {
    ov.note("dispersion.lmax", d_lmax);
    ov.note("dispersion.n", d_n);
    ov.note("dispersion.eps", d_eps);
    ov.note("dispersion.zero_order", d_zero);
    action = [&] {
      const Run run(g, "dispersion", ov);
      const ZeroOrder tag = zero_order_from_string(run.cfg().string_or("dispersion.zero_order", "mu"));
      const DispersionCurve curve =
          scan_dispersion(make_dispersion(run, tag), run.cfg().number_or("dispersion.eps", 0.0),
                          run.cfg().number_or("dispersion.lmax", 3.0),
                          static_cast<int>(run.cfg().integer_or("dispersion.n", 33)));
      CsvTable t{{"lambda", "k"}, {}};
      for (std::size_t j = 0; j < curve.lambdas.size(); ++j) t.rows.push_back({curve.lambdas[j], curve.ks[j]});
      write_csv(run.path("dispersion.csv"), t);
      run.summary({{"samples", curve.lambdas.size()},
                   {"concave", curve.concave},
                   {"concavity_defect", curve.concavity_defect},
                   {"bounds_ok", curve.bounds_ok},
                   {"bound_violation", curve.bound_violation}});
      return int(ok);
    };
  });

  // speed
  auto* speed = app.add_subcommand("speed", "minimal speed c* for the chosen zero-order term");
  std::optional<double> s_eps;
  std::optional<std::string> s_zero;
  speed->add_option("--eps", s_eps, "regularization epsilon");
  speed->add_option("--zero-order", s_zero, "mu or eta");
  speed->callback([&] {
    ov.note("speed.eps", s_eps);
    ov.note("speed.zero_order", s_zero);
    action = [&] {
      const Run run(g, "speed", ov);
      const ZeroOrder tag = zero_order_from_string(run.cfg().string_or("speed.zero_order", "mu"));
      const SpeedResult s = minimal_speed(make_dispersion(run, tag), run.cfg().number_or("speed.eps", 0.0));
      run.summary({{"c_star", s.c_star}, {"lambda_star", s.lambda_star}, {"eps", s.eps}, {"zero_order", to_string(tag)}});
      return int(ok);
    };
  });

  // roots
  auto* roots = app.add_subcommand("roots", "decay exponents lam <= Lam at speed c");
  std::optional<double> r_c, r_eps;
  std::optional<std::string> r_zero;
  roots->add_option("--c", r_c, "front speed");
  roots->add_option("--eps", r_eps, "regularization epsilon");
  roots->add_option("--zero-order", r_zero, "mu or eta");
  roots->callback([&] {
    ov.note("roots.c", r_c);
    ov.note("roots.eps", r_eps);
    ov.note("roots.zero_order", r_zero);
    action = [&] {
      const Run run(g, "roots", ov);
      if (!run.cfg().has("roots.c")) throw ConfigError("roots needs --c");
      const ZeroOrder tag = zero_order_from_string(run.cfg().string_or("roots.zero_order", "mu"));
      const RootPair r =
          decay_roots(make_dispersion(run, tag), run.cfg().number_or("roots.eps", 0.0), run.cfg().number("roots.c"));
      run.summary({{"c", r.c}, {"lam", r.lam}, {"Lam", r.Lam}, {"residual", r.residual}});
      return int(ok);
    };
  });

  // equilibrium
  auto* equilibrium = app.add_subcommand("equilibrium", "positive space-time periodic state p");
  equilibrium->callback([&] {
    action = [&] {
      const Run run(g, "equilibrium", ov);
      const PeriodicState state = compute_equilibrium(run.coeffs(), run.spec().reaction);
      write_csv(run.path("p.csv"), torus_table(state.p, "p"));
      run.summary({{"residual", state.residual},
                   {"min_p", state.p.min()},
                   {"max_p", state.p.max()},
                   {"periods", state.periods}});
      return int(ok);
    };
  });

  // front
  auto* front = app.add_subcommand("front", "pulsating front profile on a finite cylinder");
  std::optional<double> f_c, f_eps, f_a;
  std::optional<std::string> f_path;
  std::optional<int> f_slice;
  front->add_option("--c", f_c, "front speed");
  front->add_option("--eps", f_eps, "regularization epsilon");
  front->add_option("--a", f_a, "cylinder half length");
  front->add_option("--path", f_path, "kpp or general");
  front->add_option("--slice", f_slice, "write only this time index of phi");
  front->callback([&] {
    ov.note("front.c", f_c);
    ov.note("front.eps", f_eps);
    ov.note("front.a", f_a);
    ov.note("front.path", f_path);
    ov.note("front.slice", f_slice);
    action = [&] {
      const Run run(g, "front", ov);
      if (!run.cfg().has("front.c")) throw ConfigError("front needs --c");
      const double c = run.cfg().number("front.c");
      const double eps = run.cfg().number_or("front.eps", 0.1);
      const double a = run.cfg().number_or("front.a", 15.0);
      FrontOptions fo;
      fo.path = front_path_from_string(run.cfg().string_or("front.path", "kpp"));
      const FrontMedium medium = FrontMedium::build(run.coeffs(), run.spec().reaction, run.direction());
      const FrontProfile prof = monotone_iteration(medium, c, eps, a, fo);
      const RootPair r = decay_roots(medium.mu_dispersion(), eps, c);
      const ProfileReport rep = profile_diagnostics(prof, prof.sub.psi_lam, r);
      if (!run.no_field()) {
        const CylinderGrid& cg = prof.phi.grid();
        const int slice = static_cast<int>(run.cfg().integer_or("front.slice", -1));
        if (slice >= cg.base.nt) throw ConfigError("--slice beyond the time grid");
        CsvTable t{{"z_index", "t_index", "x_index", "phi"}, {}};
        for (int j = 0; j <= cg.nz; ++j)
          for (int n = 0; n < cg.base.nt; ++n) {
            if (slice >= 0 && n != slice) continue;
            for (int i = 0; i < cg.base.nx; ++i) t.rows.push_back({double(j), double(n), double(i), prof.phi(j, n, i)});
          }
        write_csv(run.path("phi.csv"), t);
      }
      const bool sandwich_ok = fo.path == FrontPath::general || prof.sandwich_relative_defect <= fo.sandwich_tol;
      run.summary({{"iters", prof.iters},
                   {"c", c},
                   {"eps", eps},
                   {"a", prof.a},
                   {"path", to_string(fo.path)},
                   {"nz", prof.phi.grid().nz},
                   {"dz", prof.phi.grid().dz()},
                   {"beta", prof.beta},
                   {"monotone_defect", prof.monotone_defect},
                   {"monotone_relative_defect", prof.monotone_relative_defect},
                   {"z_monotone_defect", prof.z_monotone_defect},
                   {"sandwich_defect", prof.sandwich_defect},
                   {"sandwich_relative_defect", prof.sandwich_relative_defect},
                   {"sandwich_ok", sandwich_ok},
                   {"tail_slope", rep.tail_slope},
                   {"lam", r.lam},
                   {"Lam", r.Lam},
                   {"ratio_flatness", rep.ratio_flatness},
                   {"log_derivative", rep.log_derivative},
                   {"nearest_root", rep.nearest_root},
                   {"tau", prof.tau}});
      return int(ok);
    };
  });

  // spread
  auto* spread = app.add_subcommand("spread", "direct simulation and spreading-speed estimate");
  std::optional<std::string> sp_u0;
  std::optional<int> sp_periods, sp_substeps;
  spread->add_option("--u0", sp_u0, "step, bump, exp:<lambda0>, equilibrium or zero");
  spread->add_option("--t-end", sp_periods, "number of periods");
  spread->add_option("--substeps", sp_substeps, "IMEX substeps per grid interval");
  spread->callback([&] {
    ov.note("spread.u0", sp_u0);
    ov.note("spread.t_end", sp_periods);
    ov.note("spread.substeps", sp_substeps);
    action = [&] {
      const Run run(g, "spread", ov);
      const InitialDatum u0 = InitialDatum::parse(run.cfg().string_or("spread.u0", "step"));
      const int periods = static_cast<int>(run.cfg().integer_or("spread.t_end", 40));
      const Nonlinearity& nl = run.spec().reaction;
      const PeriodicState state = compute_equilibrium(run.coeffs(), nl);
      SpreadingAuditOptions so;
      so.periods = periods;
      so.substeps = static_cast<int>(run.cfg().integer_or("spread.substeps", 1));
      nlohmann::json body;
      SpreadingTrace trace;
      if (u0.kind == InitialDatum::Kind::step && u0.scale == 1.0) {
        const SpreadingAudit rep = spreading_audit(run.coeffs(), nl, state.p, run.direction(), so);
        trace = rep.trace;
        body = {{"c_hat", rep.c_hat},
                {"stderr", rep.stderr_},
                {"c_star_mu", rep.c_mu},
                {"c_star_eta", rep.c_eta},
                {"sandwich", rep.sandwich_pass ? "pass" : "fail"},
                {"kpp_relative_error", rep.kpp ? nlohmann::json(rep.kpp_relative_error) : nlohmann::json(nullptr)},
                {"below_frame_distance", rep.below_distance},
                {"above_frame_sup", rep.above_sup}};
      } else {
        EvolveOptions ev;
        ev.substeps = so.substeps;
        const ScalarField eta = evaluate_eta(nl, run.coeffs(), state.p);
        const double c_mu = minimal_speed(Dispersion(run.coeffs(), run.coeffs().mu, ZeroOrder::mu, run.direction()), 0.0).c_star;
        const double c_eta = minimal_speed(Dispersion(run.coeffs(), eta, ZeroOrder::eta, run.direction()), 0.0).c_star;
        ev.speed_bound = std::max(c_eta, 0.0) + 1.0;
        const LineRun line = evolve_line(run.coeffs(), nl, state.p, u0, periods, run.direction(), ev);
        trace = track_front(line, state.p, so.level);
        body = {{"c_star_mu", c_mu}, {"c_star_eta", c_eta}, {"points", trace.times.size()}};
        if (trace.times.size() >= 10) {
          const SpeedEstimate est = estimate_speed(trace, so.discard_fraction);
          const bool inside = est.c_hat >= c_mu * (1.0 - so.tolerance) && est.c_hat <= c_eta * (1.0 + so.tolerance);
          body["c_hat"] = est.c_hat;
          body["stderr"] = est.stderr_;
          body["sandwich"] = inside ? "pass" : "fail";
        } else {
          body["c_hat"] = nullptr;
          body["stderr"] = nullptr;
          body["sandwich"] = "n/a";
        }
      }
      CsvTable t{{"t", "x_front"}, {}};
      for (std::size_t k = 0; k < trace.times.size(); ++k) t.rows.push_back({trace.times[k], trace.positions[k]});
      write_csv(run.path("front_position.csv"), t);
      run.summary(body);
      return int(ok);
    };
  });

  // audit
  auto* audit = app.add_subcommand("audit", "acceptance suite with a pass matrix");
  std::optional<std::vector<int>> a_only;
  audit->add_option("--only", a_only, "criteria to run (default: all)");
  audit->callback([&] {
    action = [&] {
      const Run run(g, "audit", ov);
      AuditOptions ao;
      ao.seed = run.seed();
      ao.spread_periods = static_cast<int>(run.cfg().integer_or("audit.spread_periods", ao.spread_periods));
      ao.front_grid = static_cast<int>(run.cfg().integer_or("audit.front_grid", ao.front_grid));
      ao.front_half_length = run.cfg().number_or("audit.front_half_length", ao.front_half_length);
      if (a_only) ao.only = *a_only;
      const AuditResult result = run_audit(ao, [](const AuditRow& row) {
        std::cout << (row.pass() ? "PASS" : "FAIL") << "  criterion " << row.id << "  " << row.name;
        if (!row.error.empty()) std::cout << "  (" << row.error << ")";
        std::cout << std::endl;
      });
      write_audit(result, g.out_dir, run.manifest());
      return int(result.pass() ? ok : audit_failure);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::RequiredError& e) {
    if (app.get_subcommands().empty()) {
      std::cerr << e.what() << "\n" << app.help();
      return usage;
    }
    std::cerr << e.what() << "\n";
    return config_error;
  } catch (const CLI::ExtrasError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return usage;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return config_error;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_error;
  }
}
