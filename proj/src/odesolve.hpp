#pragma once

#include <string>
#include <vector>

#include "integral.hpp"
#include "ode_system.hpp"

namespace laxquad {

struct InitialCondition {
  double z = 0.0;
  double y = 0.0;
  double yp = 0.0;
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  int dense_points = 200;       // equally spaced outputs over the span
  double max_state = 1e6;       // |y| or |y'| beyond this counts as escape
  long max_steps = 2000000;
};

struct TrajectorySample {
  double z = 0.0;
  double y = 0.0;
  double yp = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // z strictly monotone
  InitialCondition ic;
  double rtol = 0.0, atol = 0.0;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_error_estimate = 0.0;
  bool complete = false;       // reached the requested span
  bool halted_singular = false;
  std::string halt_reason;
  double z_end = 0.0;          // last integrated z
};

// Embedded Dormand-Prince 5(4) with the standard step controller and dense
// output; halts with a flagged partial trajectory when a denominator of f or
// g falls below the guard, the state escapes, or the step size underflows.
Trajectory integrate(const OdeSystem& sys, const InitialCondition& ic,
                     double span, const IntegrateOptions& opt = {});

// max over samples of |I(sample) - I(ic)| / (1 + |I(ic)|); samples where the
// integral cannot be evaluated are skipped.
double conservation_drift(const FirstIntegral& fi, const Trajectory& traj);

// Evenly thinned copy (first and last samples kept); used where per-sample
// evaluation is expensive and a coarse sweep suffices.
Trajectory thin_trajectory(const Trajectory& traj, size_t max_samples);

}  // namespace laxquad
