#pragma once

#include <span>
#include <vector>

#include "pulse/medium.hpp"
#include "pulse/tridiag.hpp"

namespace pulse {

/// IMEX marching for u_t = d_x(a d_x u) - q d_x u + f(t,x,u): implicit Euler in
/// the transport-diffusion part, explicit in f. Each torus time interval is
/// split into `substeps` equal steps with coefficients interpolated linearly
/// in time. The same scheme runs on the torus (x-periodic) and on a line of
/// torus-spaced nodes with homogeneous Dirichlet ends.
class ImexStepper {
public:
  ImexStepper(const CoefficientSet& coeffs, const Nonlinearity& nl, int substeps = 1);

  const CoefficientSet& coeffs() const { return coeffs_; }
  const Nonlinearity& reaction() const { return nl_; }
  int substeps() const { return substeps_; }
  double step_size() const { return coeffs_.grid.dt() / substeps_; }

  /// Advances a torus slice from time level n to n+1.
  void advance_torus(std::vector<double>& u, int n) const;
  /// One full period on the torus; `levels`, if given, receives u at t_0..t_{nt-1}.
  void period_torus(std::vector<double>& u, std::vector<std::vector<double>>* levels = nullptr) const;

  /// Advances line values from time level n to n+1. Node j sits at
  /// x = (j + offset) * dx; the ends are held at zero.
  void advance_line(std::vector<double>& u, long offset, int n) const;

private:
  struct Level {
    std::vector<double> lower, diag, upper, mu;
  };
  Level level_at(int n, int k) const;
  void reaction_step(std::span<double> u, std::span<const double> mu_torus, long offset, bool periodic) const;

  CoefficientSet coeffs_;
  Nonlinearity nl_;
  int substeps_;
  std::vector<Level> levels_;                 // one per (n, k), k-th substep of interval n
  std::vector<CyclicTridiagonal> torus_solve_;  // (I/h - M) on the torus, per (n, k)
};

}  // namespace pulse
