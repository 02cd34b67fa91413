#pragma once

#include <string>
#include <vector>

#include "pulse/stepper.hpp"

namespace pulse {

/// Initial data on the line, oriented by the direction e: the invaded state p
/// sits on the side x e >= 0 and the front moves toward -e.
struct InitialDatum {
  enum class Kind { step, bump, exp_tail, equilibrium, zero };
  Kind kind = Kind::step;
  double lambda0 = 0.0;     // exp_tail decay rate
  double half_width = 0.0;  // bump half width (0: two periods L)
  double scale = 1.0;       // multiplies the datum

  /// "step", "bump", "exp:<lambda0>", "equilibrium" or "zero".
  static InitialDatum parse(const std::string& text);
  std::string describe() const;
};

/// Torus-spaced line nodes x_j = (j + offset) dx, j = 0..n-1, Dirichlet zero at both ends.
struct LineGrid {
  double half_width = 0.0;
  long offset = 0;
  long n = 0;
  double dx = 0.0;

  static LineGrid make(double half_width, const TorusGrid& base);
  double x(long j) const { return double(j + offset) * dx; }
};

struct Snapshot {
  int period = 0;
  double t = 0.0;
  std::vector<double> u;
};

struct LineRun {
  LineGrid line;
  int direction = 1;
  std::vector<Snapshot> snapshots;
};

struct EvolveOptions {
  int substeps = 1;
  double half_width = 0.0;   // 0: chosen from speed_bound and the run length
  double speed_bound = 0.0;  // upper bound on spreading speeds, used for the line size
  int snapshot_every = 1;    // periods between snapshots
  bool check_containment = true;
};

/// IMEX march of the full equation on the line over `periods` periods.
LineRun evolve_line(const CoefficientSet& coeffs, const Nonlinearity& nl, const ScalarField& p, const InitialDatum& u0,
                    int periods, int direction, const EvolveOptions& options = {});

struct SpreadingTrace {
  std::vector<double> times;
  std::vector<double> positions;  // distance invaded along -e
  double level = 0.5;
  int dropped = 0;
};

/// Front position at each snapshot: the farthest point along -e where u >= level p,
/// linearly interpolated between nodes.
SpreadingTrace track_front(const LineRun& run, const ScalarField& p, double level = 0.5);

struct SpeedEstimate {
  double c_hat = 0.0;
  double stderr_ = 0.0;
  int points = 0;
};

/// Least-squares slope of position against time after discarding the first
/// `discard_fraction` of the run.
SpeedEstimate estimate_speed(const SpreadingTrace& trace, double discard_fraction = 1.0 / 3.0);

/// Sup |u - p| over xi in [center - half, center + half] (xi = -x e) at one snapshot.
double frame_distance_to_p(const LineRun& run, const Snapshot& snap, const ScalarField& p, double center, double half);
/// Sup u over xi in [start, start + length] at one snapshot.
double frame_sup(const LineRun& run, const Snapshot& snap, double start, double length);

struct SpreadingAuditOptions {
  int periods = 40;
  double level = 0.5;
  double discard_fraction = 1.0 / 3.0;
  int substeps = 1;
  double tolerance = 0.05;   // relative, for the speed sandwich and the KPP equality
  double frame_tol = 1e-2;
  double below_factor = 0.6;
  double above_factor = 1.25;
};

struct SpreadingAudit {
  double c_hat = 0.0;
  double stderr_ = 0.0;
  double c_mu = 0.0;
  double c_eta = 0.0;
  double c_mu_opposite = 0.0;  // c*(mu) in direction -e
  bool sandwich_pass = false;
  bool kpp = false;
  double kpp_relative_error = 0.0;
  bool kpp_pass = true;
  double below_speed = 0.0;
  double below_distance = 0.0;
  bool below_valid = true;
  bool below_pass = false;
  double above_speed = 0.0;
  double above_sup = 0.0;
  bool above_pass = false;
  SpreadingTrace trace;
  bool pass() const { return sandwich_pass && kpp_pass && (!below_valid || below_pass) && above_pass; }
};

SpreadingAudit spreading_audit(const CoefficientSet& coeffs, const Nonlinearity& nl, const ScalarField& p,
                               int direction, const SpreadingAuditOptions& options = {});

}  // namespace pulse
