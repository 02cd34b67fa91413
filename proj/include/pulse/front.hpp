#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pulse/cylinder.hpp"
#include "pulse/dispersion.hpp"
#include "pulse/equilibrium.hpp"

namespace pulse {

/// Everything a front computation needs about the medium: coefficients,
/// reaction, the periodic state p and the growth envelope eta.
struct FrontMedium {
  CoefficientSet coeffs;
  Nonlinearity nl;
  ScalarField p;
  ScalarField eta;
  int direction = 1;

  static FrontMedium build(const CoefficientSet& coeffs, const Nonlinearity& nl, int direction = 1,
                           const EquilibriumOptions& eq = {});
  Dispersion mu_dispersion() const { return Dispersion(coeffs, coeffs.mu, ZeroOrder::mu, direction); }
  Dispersion eta_dispersion() const { return Dispersion(coeffs, eta, ZeroOrder::eta, direction); }
  Dispersion dispersion(ZeroOrder tag) const { return tag == ZeroOrder::mu ? mu_dispersion() : eta_dispersion(); }
};

/// zeta(z,t,x) = min(p, psi_lam e^{lam (z + shift)}).
struct Supersolution {
  double lam = 0.0;
  double Lam = 0.0;
  ZeroOrder tag = ZeroOrder::mu;
  ScalarField psi;
  ScalarField p;
  double shift = 0.0;

  double exponential(double z, int n, int i) const;
  double operator()(double z, int n, int i) const;
};

/// theta_0 = psi_lam e^{lam z'} - A psi_{lam+gamma} e^{(lam+gamma) z'} with
/// z' = z + shift, and theta = max(theta_0, 0).
struct Subsolution {
  double lam = 0.0;
  double Lam = 0.0;
  double gamma_gap = 0.0;
  double A_amp = 0.0;
  double alpha_gap = 0.0;  // k_{(lam+gamma)e} + (lam+gamma)c - eps (lam+gamma)^2
  double A_bounds[3] = {0.0, 0.0, 0.0};  // height cap, growth bound, sign on z >= 0
  ScalarField psi_lam;
  ScalarField psi_lam_gamma;
  double shift = 0.0;

  double raw(double z, int n, int i) const;
  double operator()(double z, int n, int i) const;
  /// Position of the maximum in z of min over (t,x) of theta.
  double peak_position() const;
  /// Root of theta_0 for constant psi (reported as -ln(A)/gamma).
  double nominal_root() const { return -std::log(A_amp) / gamma_gap; }
};

Supersolution build_supersolution(const FrontMedium& medium, ZeroOrder tag, double c, double eps);
Subsolution build_subsolution(const FrontMedium& medium, double c, double eps);

/// max over nodes with theta_0 > 0 of L_eps theta_0 - f(theta_0) (<= 0 for a subsolution).
double subsolution_residual(const FrontMedium& medium, const Subsolution& sub, const CylinderGrid& grid, double c,
                            double eps);
/// min over nodes with zeta < p of L_eps zeta - f(zeta) (>= 0 for a supersolution).
double supersolution_residual(const FrontMedium& medium, const Supersolution& sup, const CylinderGrid& grid, double c,
                              double eps);

enum class FrontPath { kpp, general };
FrontPath front_path_from_string(const std::string& name);
std::string to_string(FrontPath path);

struct FrontOptions {
  double tol = 1e-10;        // outer sup change
  int max_outer = 5000;
  double inner_tol = 1e-13;  // periodic linear solve
  FrontPath path = FrontPath::kpp;
  int min_m = 1;             // at least this many z nodes per dx
  double pin_tol = 1e-4;     // general path: pinning residual relative to the target level
  /// Largest accepted sandwich violation relative to the local barrier value.
  /// The barriers are continuous objects sampled on the grid, so they bound the
  /// discrete iterates only up to the scheme's consistency error.
  double sandwich_tol = 1e-2;
  /// Largest accepted rise phi_{n+1} - phi_n relative to phi_n. The first step
  /// from the sampled supersolution rises by the same consistency error.
  double monotone_tol = 1e-2;
};

struct FrontProfile {
  Field3 phi;
  double c = 0.0;
  double eps = 0.0;
  double a = 0.0;
  FrontPath path = FrontPath::kpp;
  int iters = 0;
  double beta = 0.0;
  double last_change = 0.0;
  double monotone_defect = 0.0;    // worst phi_{n+1} - phi_n over all outer steps
  double monotone_relative_defect = 0.0;  // the same, divided by phi_n at the node
  double z_monotone_defect = 0.0;  // worst phi(z) - phi(z + dz)
  double sandwich_defect = 0.0;    // worst max(theta - phi, phi - zeta) over all outer iterates
  double sandwich_relative_defect = 0.0;  // the same, divided by theta or zeta at the node
  double first_step_defect = 0.0;  // worst phi_1 - phi_0
  double tau = 0.0;                // general path boundary shift
  Subsolution sub;
  Supersolution sup;
};

/// Smallest m for which the centered c d_z term keeps the scheme monotone.
int required_z_refinement(const TorusGrid& base, double c, double eps);

/// beta = ½||d_x q|| + Lip(f on [0, max p]) + 1.
double monotone_shift(const FrontMedium& medium);

/// Monotone iteration phi_0 = zeta, (L_eps + beta) phi_{n+1} = f(phi_n) + beta phi_n
/// on [-a, a] with Dirichlet data theta on the left and zeta on the right.
FrontProfile monotone_iteration(const FrontMedium& medium, double c, double eps, double a,
                                const FrontOptions& options = {});

/// Period-map contraction measured on random pairs for the linear problem of the
/// first outer step, with its theoretical bound.
struct ContractionReport {
  double measured = 0.0;
  double bound = 0.0;
  double beta = 0.0;
  bool ok = false;
};
ContractionReport contraction_certificate(const FrontMedium& medium, double c, double eps, double a, int pairs,
                                          std::uint64_t seed, const FrontOptions& options = {});

/// z at which the (t,x)-mean of phi crosses half the mean of p.
double pin_position(const FrontProfile& profile, const ScalarField& p);

/// (t,x)-mean of phi at pinned coordinate s (z = s + pin), linear in z.
double pinned_mean(const FrontProfile& profile, double pin, double s);

struct ContinuationReport {
  std::vector<double> half_lengths;
  std::vector<double> window_changes;  // between consecutive a
  double window = 0.0;
  bool converged = false;
  double right_limit_error = 0.0;  // sup |phi(a) - p|
  double left_limit = 0.0;         // sup phi(-a)
  double left_limit_bound = 0.0;   // 2 e^{-lam a}
  FrontProfile profile;
};

/// Doubles a until the pinned profile on [-a0/2, a0/2] changes by less than tol_a.
ContinuationReport continue_domain(const FrontMedium& medium, double c, double eps, double a_start, double tol_a,
                                   int max_doublings = 4, const FrontOptions& options = {});

struct SweepReport {
  std::vector<double> eps;
  std::vector<FrontProfile> profiles;
  std::vector<double> pins;
  double window = 0.0;
  std::vector<double> l1_distances;     // consecutive pairs
  bool cauchy = true;                   // distances strictly decreasing
  std::vector<double> total_variation;  // (t,x)-mean of sum |d phi| over the window
  double variation_bound = 0.0;         // mean p
  bool variation_ok = true;
  std::vector<double> max_slope;        // max d_z phi
  std::vector<double> slope_bound;      // 1.1 Lam_eps max p
  bool slope_ok = true;
};

SweepReport eps_sweep(const FrontMedium& medium, double c, const std::vector<double>& eps_list, double a,
                      const FrontOptions& options = {});

struct ProfileReport {
  double tail_slope = 0.0;
  double tail_reference = 0.0;  // lam of the supplied roots
  double tail_relative_error = 0.0;
  double ratio_flatness = 0.0;
  double log_derivative = 0.0;
  std::string nearest_root;
  bool log_derivative_in_pair = false;
  double monotone_defect = 0.0;
  double monotone_relative_defect = 0.0;
  double z_monotone_defect = 0.0;
  double sandwich_defect = 0.0;
  double sandwich_relative_defect = 0.0;
};

/// Left tail diagnostics on z in [-a, -a/2].
ProfileReport profile_diagnostics(const FrontProfile& profile, const ScalarField& psi_lam, const RootPair& roots);

}  // namespace pulse
