#include <cmath>

#include "doctest.h"
#include "pulse/errors.hpp"
#include "pulse/spreading.hpp"

using namespace pulse;

namespace {

const CoefficientSet& unit_medium() {
  static const CoefficientSet c = CoefficientSet::constant(TorusGrid::make(1, 1, 8, 8), 1.0, 0.0, 1.0);
  return c;
}

}  // namespace

TEST_CASE("initial datum parsing") {
  CHECK(InitialDatum::parse("step").kind == InitialDatum::Kind::step);
  CHECK(InitialDatum::parse("bump").kind == InitialDatum::Kind::bump);
  const InitialDatum e = InitialDatum::parse("exp:0.5");
  CHECK(e.kind == InitialDatum::Kind::exp_tail);
  CHECK(e.lambda0 == 0.5);
  CHECK_THROWS_AS(InitialDatum::parse("exp:"), ConfigError);
  CHECK_THROWS_AS(InitialDatum::parse("exp:-1"), ConfigError);
  CHECK_THROWS_AS(InitialDatum::parse("wedge"), ConfigError);
}

TEST_CASE("speed estimate recovers a linear trace") {
  SpreadingTrace trace;
  for (int k = 0; k <= 30; ++k) {
    trace.times.push_back(k);
    trace.positions.push_back(3.0 + 1.75 * k);
  }
  const SpeedEstimate s = estimate_speed(trace);
  CHECK(s.c_hat == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(s.stderr_ < 1e-10);
  CHECK(s.points >= 10);
  CHECK_THROWS_AS(estimate_speed(SpreadingTrace{}), NumericalError);
}

TEST_CASE("zero datum never produces a front") {
  const ScalarField p(unit_medium().grid, 1.0);
  EvolveOptions o;
  o.half_width = 20.0;
  const LineRun run = evolve_line(unit_medium(), Nonlinearity::make(Family::homogeneous_logistic), p,
                                  InitialDatum::parse("zero"), 3, 1, o);
  CHECK(run.snapshots.size() >= 3);
  for (const Snapshot& s : run.snapshots)
    for (double v : s.u) CHECK(v == 0.0);
  CHECK(track_front(run, p).positions.empty());
}

TEST_CASE("equilibrium datum stays at p away from the line ends") {
  const ScalarField p(unit_medium().grid, 1.0);
  EvolveOptions o;
  o.half_width = 30.0;
  const LineRun run = evolve_line(unit_medium(), Nonlinearity::make(Family::homogeneous_logistic), p,
                                  InitialDatum::parse("equilibrium"), 3, 1, o);
  CHECK(frame_distance_to_p(run, run.snapshots.back(), p, 0.0, 5.0) < 1e-8);
}

TEST_CASE("step datum invades the zero state") {
  const ScalarField p(unit_medium().grid, 1.0);
  EvolveOptions o;
  o.speed_bound = 3.0;
  const LineRun run = evolve_line(unit_medium(), Nonlinearity::make(Family::homogeneous_logistic), p,
                                  InitialDatum::parse("step"), 12, 1, o);
  const SpreadingTrace trace = track_front(run, p);
  CHECK(trace.positions.size() >= 10);
  CHECK(trace.positions.back() > trace.positions.front() + 10.0);
}
