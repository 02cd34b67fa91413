#include "pulse/tridiag.hpp"

#include <cmath>

#include "pulse/errors.hpp"

namespace pulse {

Tridiagonal::Tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), upper_prime_(diag.size()), inv_pivot_(diag.size()) {
  const std::size_t n = diag.size();
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(diag[k]));
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = diag[k] - (k > 0 ? lower[k] * upper_prime_[k - 1] : 0.0);
    if (!(std::abs(pivot) > 1e-14 * scale) || !std::isfinite(pivot))
      throw NumericalError("singular tridiagonal system", {{"row", double(k)}, {"pivot", pivot}, {"scale", scale}});
    inv_pivot_[k] = 1.0 / pivot;
    upper_prime_[k] = (k + 1 < n ? upper[k] : 0.0) * inv_pivot_[k];
  }
}

void Tridiagonal::solve(std::span<double> rhs) const {
  const std::size_t n = inv_pivot_.size();
  rhs[0] *= inv_pivot_[0];
  for (std::size_t k = 1; k < n; ++k) rhs[k] = (rhs[k] - lower_[k] * rhs[k - 1]) * inv_pivot_[k];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= upper_prime_[k] * rhs[k + 1];
}

CyclicTridiagonal::CyclicTridiagonal(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper) {
  const std::size_t n = diag.size();
  if (n < 3) throw NumericalError("cyclic tridiagonal system needs at least 3 rows", {{"n", double(n)}});
  // A = B + u v^T with u = (gamma, 0, ..., 0, A[n-1][0]), v = (1, 0, ..., 0, A[0][n-1]/gamma).
  const double corner_lower = upper[n - 1];
  const double corner_upper = lower[0];
  const double gamma = -diag[0];
  if (gamma == 0.0) throw NumericalError("cyclic tridiagonal system has a zero leading diagonal");
  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= corner_lower * corner_upper / gamma;
  inner_ = Tridiagonal(lower, d, upper);
  correction_.assign(n, 0.0);
  correction_[0] = gamma;
  correction_[n - 1] = corner_lower;
  inner_.solve(correction_);
  v_last_ = corner_upper / gamma;
  denom_ = 1.0 + correction_[0] + v_last_ * correction_[n - 1];
  if (!(std::abs(denom_) > 1e-14) || !std::isfinite(denom_))
    throw NumericalError("singular cyclic tridiagonal system", {{"sherman_morrison_denominator", denom_}});
}

void CyclicTridiagonal::solve(std::span<double> rhs) const {
  const std::size_t n = correction_.size();
  inner_.solve(rhs);
  const double factor = (rhs[0] + v_last_ * rhs[n - 1]) / denom_;
  for (std::size_t k = 0; k < n; ++k) rhs[k] -= factor * correction_[k];
}

}  // namespace pulse
