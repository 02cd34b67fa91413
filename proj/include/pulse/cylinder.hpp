#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pulse/medium.hpp"

namespace pulse {

/// Finite cylinder [-a, a] x torus in the moving coordinate z = x e + c t.
/// The z spacing is dx/m so that a step of dx in x moves exactly m nodes in z;
/// the operator D = d_x + e d_z is differenced along that lattice diagonal.
struct CylinderGrid {
  double half_length = 0.0;
  int nz = 0;  // nodes j = 0..nz, z_j = -a + j dz; j = 0 and nz are Dirichlet planes
  int m = 1;
  TorusGrid base;

  /// Smallest grid with half length >= a and at least min_m z nodes per dx.
  static CylinderGrid make(double a, const TorusGrid& base, int min_m);

  double dz() const { return base.dx() / m; }
  double z(int j) const { return -half_length + j * dz(); }
  int interior() const { return nz - 1; }
  std::size_t layer_size() const { return std::size_t(base.nt) * base.nx; }
  std::size_t size() const { return std::size_t(nz + 1) * layer_size(); }
};

/// Values on the cylinder nodes, z-major then t then x. t and x indices wrap.
class Field3 {
public:
  Field3() = default;
  explicit Field3(const CylinderGrid& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {}

  const CylinderGrid& grid() const { return grid_; }
  double& operator()(int j, int n, int i) { return values_[index(j, n, i)]; }
  double operator()(int j, int n, int i) const { return values_[index(j, n, i)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Mean over (t, x) of the layer j.
  double layer_mean(int j) const;
  double layer_min(int j) const;

private:
  std::size_t index(int j, int n, int i) const {
    const TorusGrid& b = grid_.base;
    return (std::size_t(j) * b.nt + b.wrap_t(n)) * b.nx + b.wrap_x(i);
  }
  CylinderGrid grid_;
  std::vector<double> values_;
};

/// Value of a field at any lattice node (j may lie beyond 0..nz), used for
/// Dirichlet data and for analytic sub/supersolutions.
using LatticeFunction = std::function<double(int j, int n, int i)>;

/// Samples a lattice function on the cylinder nodes.
Field3 sample(const CylinderGrid& grid, const LatticeFunction& f);

/// Data of the shifted operator (L_eps + beta) with
/// L_eps = d_t - D(a D) + q D - eps d_zz + c d_z, D = d_x + e d_z.
struct CylinderOperator {
  double c = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  int direction = 1;
  const CoefficientSet* coeffs = nullptr;
};

/// Discrete L_eps f at node (j, n, i) with a backward time difference
/// (the implicit Euler consistency form). beta is not included.
double apply_front_operator(const CylinderGrid& grid, const CylinderOperator& op, const LatticeFunction& f, int j,
                            int n, int i);

struct PeriodicSolveStats {
  int periods = 0;
  double last_change = 0.0;
};

/// Solves (L_eps + beta) u = rhs on the cylinder, periodic in t and x, with
/// Dirichlet data `bc` at every lattice node outside 1..nz-1. The time-periodic
/// solution is the fixed point of the implicit Euler period map, iterated from
/// a warm start.
class PeriodicCylinderSolver {
public:
  PeriodicCylinderSolver(const CylinderGrid& grid, const CylinderOperator& op);
  ~PeriodicCylinderSolver();
  PeriodicCylinderSolver(const PeriodicCylinderSolver&) = delete;
  PeriodicCylinderSolver& operator=(const PeriodicCylinderSolver&) = delete;

  const CylinderGrid& grid() const { return grid_; }
  const CylinderOperator& op() const { return op_; }

  /// Fixed point of the period map to sup change < tol. Boundary planes of the
  /// result carry the bc values.
  Field3 solve(const Field3& rhs, const LatticeFunction& bc, const Field3* guess, double tol,
               int max_periods = 2000, PeriodicSolveStats* stats = nullptr) const;

  /// One application of the period map to the interior state at t = 0; when
  /// `trajectory` is given it receives all time levels (level 0 = the output).
  std::vector<double> period_map(const Field3& rhs, const LatticeFunction& bc, std::vector<double> u0,
                                 std::vector<std::vector<double>>* trajectory = nullptr) const;

  /// Largest observed sup-norm contraction factor of the period map over
  /// `pairs` random pairs of initial states, each pair pushed `applications`
  /// times (geometric mean per application).
  double measure_contraction(const Field3& rhs, const LatticeFunction& bc, int pairs, std::uint64_t seed,
                             double amplitude, int applications = 3) const;

  /// Theoretical bound exp(-(beta - ½ ||d_x q||) T).
  double contraction_bound() const;

private:
  struct Impl;
  void build_rhs(const Field3& rhs, const LatticeFunction& bc, int n, const std::vector<double>& prev,
                 std::vector<double>& out) const;

  CylinderGrid grid_;
  CylinderOperator op_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pulse
