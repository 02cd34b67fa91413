#include "pulse/cylinder.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pulse/errors.hpp"

namespace pulse {

CylinderGrid CylinderGrid::make(double a, const TorusGrid& base, int min_m) {
  if (!(a > 0.0)) throw ConfigError("cylinder half length must be positive");
  CylinderGrid g;
  g.base = base;
  g.m = std::max(1, min_m);
  const int half_nodes = static_cast<int>(std::ceil(a / g.dz() - 1e-9));
  g.nz = 2 * half_nodes;
  g.half_length = half_nodes * g.dz();
  if (g.nz < 2 * g.m + 4) throw ConfigError("cylinder too short for the diagonal stencil");
  return g;
}

double Field3::layer_mean(int j) const {
  const std::size_t n = grid_.layer_size();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += values_[std::size_t(j) * n + k];
  return s / double(n);
}

double Field3::layer_min(int j) const {
  const std::size_t n = grid_.layer_size();
  const auto first = values_.begin() + std::ptrdiff_t(std::size_t(j) * n);
  return *std::min_element(first, first + std::ptrdiff_t(n));
}

Field3 sample(const CylinderGrid& grid, const LatticeFunction& f) {
  Field3 out(grid);
  for (int j = 0; j <= grid.nz; ++j)
    for (int n = 0; n < grid.base.nt; ++n)
      for (int i = 0; i < grid.base.nx; ++i) out(j, n, i) = f(j, n, i);
  return out;
}

namespace {

// Stencil weights of L_eps (without d_t and beta) at one node.
struct Weights {
  double center, ne, sw, zp, zm;
};

Weights weights(const CylinderGrid& grid, const CylinderOperator& op, int n, int i) {
  const TorusGrid& b = grid.base;
  const double dx = b.dx();
  const double dz = grid.dz();
  const ScalarField& a = op.coeffs->a;
  const double a_plus = 0.5 * (a(n, i) + a(n, i + 1));
  const double a_minus = 0.5 * (a(n, i - 1) + a(n, i));
  const double q = op.coeffs->q(n, i);
  Weights w;
  w.ne = -a_plus / (dx * dx) + q / (2.0 * dx);
  w.sw = -a_minus / (dx * dx) - q / (2.0 * dx);
  w.zp = -op.eps / (dz * dz) + op.c / (2.0 * dz);
  w.zm = -op.eps / (dz * dz) - op.c / (2.0 * dz);
  w.center = (a_plus + a_minus) / (dx * dx) + 2.0 * op.eps / (dz * dz);
  return w;
}

}  // namespace

double apply_front_operator(const CylinderGrid& grid, const CylinderOperator& op, const LatticeFunction& f, int j,
                            int n, int i) {
  const Weights w = weights(grid, op, n, i);
  const int s = op.direction * grid.m;
  const double center = f(j, n, i);
  return (center - f(j, n - 1, i)) / grid.base.dt() + w.center * center + w.ne * f(j + s, n, i + 1) +
         w.sw * f(j - s, n, i - 1) + w.zp * f(j + 1, n, i) + w.zm * f(j - 1, n, i);
}

struct PeriodicCylinderSolver::Impl {
  using Matrix = Eigen::SparseMatrix<double>;
  using Solver = Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>>;
  std::vector<std::shared_ptr<Solver>> level_solver;  // per time level, shared between identical slices
  std::vector<std::vector<Weights>> level_weights;   // per time level, per x node
};

PeriodicCylinderSolver::PeriodicCylinderSolver(const CylinderGrid& grid, const CylinderOperator& op)
    : grid_(grid), op_(op), impl_(std::make_unique<Impl>()) {
  if (!op_.coeffs) throw ConfigError("cylinder operator needs coefficients");
  if (!(op_.coeffs->grid == grid_.base)) throw ConfigError("cylinder and coefficients use different torus grids");
  if (op_.direction != 1 && op_.direction != -1) throw ConfigError("direction must be +1 or -1");
  const double half_qx = 0.5 * x_derivative(op_.coeffs->q).sup_norm();
  if (!(op_.beta > half_qx))
    throw ConfigError("beta shift " + std::to_string(op_.beta) + " must exceed half the sup norm of d_x q (" +
                      std::to_string(half_qx) + ")");
  const TorusGrid& b = grid_.base;
  const int nx = b.nx;
  const int rows = grid_.interior() * nx;
  const int s = op_.direction * grid_.m;
  impl_->level_solver.resize(b.nt);
  impl_->level_weights.resize(b.nt);
  for (int n = 0; n < b.nt; ++n) {
    auto& ws = impl_->level_weights[n];
    for (int i = 0; i < nx; ++i) {
      ws.push_back(weights(grid_, op_, n, i));
      const Weights& w = ws.back();
      if (w.ne > 0.0 || w.sw > 0.0)
        throw ConfigError("drift too strong for the diagonal stencil on this grid (cell Peclet number above 1)");
      if (w.zp > 0.0 || w.zm > 0.0) throw ConfigError("z spacing too coarse for c/eps (refine m)");
    }
    for (int prev = 0; prev < n; ++prev) {
      bool same = true;
      for (int i = 0; i < nx && same; ++i) {
        const Weights& u = impl_->level_weights[prev][i];
        const Weights& v = ws[i];
        same = u.center == v.center && u.ne == v.ne && u.sw == v.sw && u.zp == v.zp && u.zm == v.zm;
      }
      if (same) {
        impl_->level_solver[n] = impl_->level_solver[prev];
        break;
      }
    }
    if (impl_->level_solver[n]) continue;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(rows) * 5);
    const double diag_shift = 1.0 / b.dt() + op_.beta;
    for (int j = 1; j < grid_.nz; ++j)
      for (int i = 0; i < nx; ++i) {
        const int r = (j - 1) * nx + i;
        const Weights& w = ws[i];
        trip.emplace_back(r, r, w.center + diag_shift);
        auto add = [&](int jj, int ii, double val) {
          if (jj >= 1 && jj < grid_.nz) trip.emplace_back(r, (jj - 1) * nx + b.wrap_x(ii), val);
        };
        add(j + s, i + 1, w.ne);
        add(j - s, i - 1, w.sw);
        add(j + 1, i, w.zp);
        add(j - 1, i, w.zm);
      }
    Impl::Matrix mat(rows, rows);
    mat.setFromTriplets(trip.begin(), trip.end());
    auto solver = std::make_shared<Impl::Solver>();
    solver->compute(mat);
    if (solver->info() != Eigen::Success)
      throw NumericalError("sparse factorization of the cylinder operator failed", {{"time_level", double(n)}});
    impl_->level_solver[n] = solver;
  }
}

PeriodicCylinderSolver::~PeriodicCylinderSolver() = default;

double PeriodicCylinderSolver::contraction_bound() const {
  const double half_qx = 0.5 * x_derivative(op_.coeffs->q).sup_norm();
  return std::exp(-(op_.beta - half_qx) * grid_.base.t_period);
}

void PeriodicCylinderSolver::build_rhs(const Field3& rhs, const LatticeFunction& bc, int n,
                                       const std::vector<double>& prev, std::vector<double>& out) const {
  const TorusGrid& b = grid_.base;
  const int nx = b.nx;
  const int nn = b.wrap_t(n);
  const int s = op_.direction * grid_.m;
  const double inv_dt = 1.0 / b.dt();
  const auto& ws = impl_->level_weights[nn];
  for (int j = 1; j < grid_.nz; ++j) {
    const bool near_edge = j <= grid_.m || j >= grid_.nz - grid_.m;
    for (int i = 0; i < nx; ++i) {
      const int r = (j - 1) * nx + i;
      double v = prev[r] * inv_dt + rhs(j, nn, i);
      if (near_edge) {
        const Weights& w = ws[i];
        auto outside = [&](int jj) { return jj < 1 || jj >= grid_.nz; };
        if (outside(j + s)) v -= w.ne * bc(j + s, nn, b.wrap_x(i + 1));
        if (outside(j - s)) v -= w.sw * bc(j - s, nn, b.wrap_x(i - 1));
        if (outside(j + 1)) v -= w.zp * bc(j + 1, nn, i);
        if (outside(j - 1)) v -= w.zm * bc(j - 1, nn, i);
      }
      out[r] = v;
    }
  }
}

std::vector<double> PeriodicCylinderSolver::period_map(const Field3& rhs, const LatticeFunction& bc,
                                                       std::vector<double> u,
                                                       std::vector<std::vector<double>>* trajectory) const {
  const TorusGrid& b = grid_.base;
  const std::size_t rows = std::size_t(grid_.interior()) * b.nx;
  if (u.size() != rows) throw ConfigError("cylinder state has the wrong size");
  std::vector<double> work(rows);
  if (trajectory) trajectory->assign(b.nt, {});
  for (int n = 1; n <= b.nt; ++n) {
    build_rhs(rhs, bc, n, u, work);
    Eigen::Map<Eigen::VectorXd> w(work.data(), Eigen::Index(rows));
    Eigen::Map<Eigen::VectorXd> x(u.data(), Eigen::Index(rows));
    x = impl_->level_solver[b.wrap_t(n)]->solve(w);
    if (trajectory) (*trajectory)[b.wrap_t(n)] = u;
  }
  for (double v : u)
    if (!std::isfinite(v)) throw NumericalError("cylinder solve produced non-finite values");
  return u;
}

Field3 PeriodicCylinderSolver::solve(const Field3& rhs, const LatticeFunction& bc, const Field3* guess, double tol,
                                     int max_periods, PeriodicSolveStats* stats) const {
  const TorusGrid& b = grid_.base;
  const int nx = b.nx;
  std::vector<double> u(std::size_t(grid_.interior()) * nx, 0.0);
  if (guess)
    for (int j = 1; j < grid_.nz; ++j)
      for (int i = 0; i < nx; ++i) u[std::size_t(j - 1) * nx + i] = (*guess)(j, 0, i);
  std::vector<std::vector<double>> traj;
  double change = 0.0;
  double prev_change = 0.0;
  int growth_streak = 0;
  int period = 0;
  for (period = 1; period <= max_periods; ++period) {
    std::vector<double> next = period_map(rhs, bc, u, &traj);
    change = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) change = std::max(change, std::abs(next[k] - u[k]));
    u.swap(next);
    if (change < tol) break;
    if (period > 1 && change >= prev_change) {
      if (++growth_streak >= 5)
        throw ConfigError("period map is not contracting (beta too small), measured factor " +
                          std::to_string(change / prev_change));
    } else {
      growth_streak = 0;
    }
    prev_change = change;
  }
  if (period > max_periods)
    throw ConvergenceError("periodic cylinder solve did not converge", {{"last_change", change}, {"tol", tol}});
  if (stats) *stats = {std::min(period, max_periods), change};
  Field3 out(grid_);
  for (int n = 0; n < b.nt; ++n)
    for (int i = 0; i < nx; ++i) {
      out(0, n, i) = bc(0, n, i);
      out(grid_.nz, n, i) = bc(grid_.nz, n, i);
      for (int j = 1; j < grid_.nz; ++j) out(j, n, i) = traj[n][std::size_t(j - 1) * nx + i];
    }
  return out;
}

double PeriodicCylinderSolver::measure_contraction(const Field3& rhs, const LatticeFunction& bc, int pairs,
                                                   std::uint64_t seed, double amplitude, int applications) const {
  if (pairs < 1 || applications < 1) throw ConfigError("contraction measurement needs pairs and applications >= 1");
  const std::size_t rows = std::size_t(grid_.interior()) * grid_.base.nx;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, amplitude);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    std::vector<double> u(rows), v(rows);
    for (auto& x : u) x = unit(rng);
    for (auto& x : v) x = unit(rng);
    double d0 = 0.0;
    for (std::size_t k = 0; k < rows; ++k) d0 = std::max(d0, std::abs(u[k] - v[k]));
    for (int a = 0; a < applications; ++a) {
      u = period_map(rhs, bc, std::move(u));
      v = period_map(rhs, bc, std::move(v));
    }
    double d1 = 0.0;
    for (std::size_t k = 0; k < rows; ++k) d1 = std::max(d1, std::abs(u[k] - v[k]));
    worst = std::max(worst, std::pow(d1 / d0, 1.0 / applications));
  }
  return worst;
}

}  // namespace pulse
