#pragma once

#include <cstdint>
#include <vector>

#include "pulse/stepper.hpp"

namespace pulse {

/// Positive space-time periodic state p of the full nonlinear equation.
struct PeriodicState {
  ScalarField p;
  double residual = 0.0;          // last period-to-period sup change
  double positivity_floor = 0.0;  // min p
  int periods = 0;
};

struct EquilibriumOptions {
  double tol = 1e-9;
  int max_periods = 10000;
  int substeps = 1;  // minimum; raised when the explicit reaction step needs it
};

/// Marches the IMEX scheme from the constant saturation level until one period
/// changes the state by less than tol; the last period is returned as p.
PeriodicState compute_equilibrium(const CoefficientSet& coeffs, const Nonlinearity& nl,
                                  const EquilibriumOptions& options = {});

/// Marches from u0 (one torus slice at t = 0) and returns the last period of
/// the trajectory once the period-to-period change drops below tol.
/// Throws ConvergenceError after max_periods.
ScalarField march_to_periodic(const ImexStepper& stepper, std::vector<double> u0, const EquilibriumOptions& options,
                              int* periods_used = nullptr);

struct UniquenessReport {
  std::vector<double> seed_levels;  // constant seeds; random seeds reported as NaN
  std::vector<double> distances;    // sup distance of each final state to p
  double max_distance = 0.0;
  int vanished = 0;                 // seeds that decayed to the zero state (excluded)
  bool unique = true;
};

/// Marches from n_seeds positive initial data (constants spanning
/// [0.1 min p, 2 max p] and two random positive periodic fields) and compares
/// each limit with p. A finite seed family can refute uniqueness, never prove it.
UniquenessReport uniqueness_probe(const CoefficientSet& coeffs, const Nonlinearity& nl, const PeriodicState& state,
                                  int n_seeds = 5, std::uint64_t seed = 1, const EquilibriumOptions& options = {});

}  // namespace pulse
