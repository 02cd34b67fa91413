#pragma once

#include <span>
#include <vector>

namespace pulse {

/// LU factorization of a tridiagonal matrix; row k reads
/// lower[k]*x[k-1] + diag[k]*x[k] + upper[k]*x[k+1] (lower[0], upper[n-1] unused).
class Tridiagonal {
public:
  Tridiagonal() = default;
  Tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);

  void solve(std::span<double> rhs) const;
  std::size_t size() const { return inv_pivot_.size(); }

private:
  std::vector<double> lower_;
  std::vector<double> upper_prime_;
  std::vector<double> inv_pivot_;
};

/// Periodic tridiagonal system: additionally lower[0] couples to x[n-1] and
/// upper[n-1] couples to x[0]. Solved by Sherman-Morrison around a Thomas
/// factorization.
class CyclicTridiagonal {
public:
  CyclicTridiagonal() = default;
  CyclicTridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper);

  void solve(std::span<double> rhs) const;
  std::size_t size() const { return correction_.size(); }

private:
  Tridiagonal inner_;
  std::vector<double> correction_;
  double v_last_ = 0.0;
  double denom_ = 1.0;
};

}  // namespace pulse
