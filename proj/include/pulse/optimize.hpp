#pragma once

#include <cmath>
#include <utility>

namespace pulse::opt {

struct Minimum {
  double x;
  double value;
  int evaluations;
};

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
/// Stops when the bracket is narrower than x_tol.
template <typename F>
Minimum golden_section(F&& f, double lo, double hi, double x_tol, int max_iters = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iters && (hi - lo) > x_tol; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evals;
  }
  return fc < fd ? Minimum{c, fc, evals} : Minimum{d, fd, evals};
}

struct Root {
  double x;
  double residual;
  int evaluations;
};

/// Bisection for a sign change of f on [lo, hi] given f(lo), f(hi) of opposite
/// sign. Stops on |f| <= f_tol or bracket width <= x_tol.
template <typename F>
Root bisect(F&& f, double lo, double f_lo, double hi, double x_tol, double f_tol, int max_iters = 200) {
  double mid = 0.5 * (lo + hi);
  double f_mid = f_lo;
  int evals = 0;
  for (int it = 0; it < max_iters; ++it) {
    mid = 0.5 * (lo + hi);
    f_mid = f(mid);
    ++evals;
    if (std::abs(f_mid) <= f_tol || (hi - lo) <= x_tol) break;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {mid, f_mid, evals};
}

}  // namespace pulse::opt
