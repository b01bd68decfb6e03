#include "odesolve.hpp"

#include <algorithm>
#include <cmath>

namespace laxquad {

namespace {

struct State {
  double y, yp;
};

struct RhsGuard : std::runtime_error {
  explicit RhsGuard(const std::string& what) : std::runtime_error(what) {}
};

struct Rhs {
  const OdeSystem& sys;
  double guard;

  State operator()(double z, const State& s) const {
    EvalPoint p{z, s.y, &sys.params};
    double f, g;
    try {
      f = sys.f.eval(p, guard);
      g = sys.g.eval(p, guard);
    } catch (const GuardViolation& gv) {
      throw RhsGuard(std::string("guard: ") + gv.what() + " (" + gv.subexpr +
                     ")");
    }
    double acc = -f * s.yp - g;
    if (!std::isfinite(acc)) throw RhsGuard("non-finite acceleration");
    return {s.yp, acc};
  }
};

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output coefficients (order-4 continuous extension).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseCoeffs {
  double r1[2], r2[2], r3[2], r4[2], r5[2];
  double z0, h;

  State at(double z) const {
    double th = (z - z0) / h;
    double th1 = 1.0 - th;
    double out[2];
    for (int i = 0; i < 2; ++i)
      out[i] =
          r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    return {out[0], out[1]};
  }
};

double comp(double e, double a, double b, double rtol, double atol) {
  double sc = atol + rtol * std::max(std::fabs(a), std::fabs(b));
  return (e / sc) * (e / sc);
}

}  // namespace

Trajectory integrate(const OdeSystem& sys, const InitialCondition& ic,
                     double span, const IntegrateOptions& opt) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  Trajectory traj;
  traj.ic = ic;
  traj.rtol = opt.rtol;
  traj.atol = opt.atol;

  Rhs rhs{sys, sys.domain.guard};
  double z = ic.z;
  State s{ic.y, ic.yp};
  State k1;
  try {
    k1 = rhs(z, s);
  } catch (const RhsGuard& e) {
    throw InvalidSystem(std::string("guard violation at initial condition: ") +
                        e.what());
  }

  traj.samples.push_back({z, s.y, s.yp});
  traj.z_end = z;
  traj.complete = span == 0.0;
  if (span == 0.0) return traj;

  double dir = span > 0 ? 1.0 : -1.0;
  double z_final = ic.z + span;
  double dense_step = span / std::max(1, opt.dense_points);
  int next_dense = 1;

  // Initial step from the usual curvature heuristic, conservative variant.
  double h = dir * std::min(std::fabs(span) * 1e-3,
                            0.01 / (1.0 + std::fabs(k1.yp) + std::fabs(k1.y)));
  if (h == 0.0) h = dir * 1e-6;

  bool last_rejected = false;
  auto escape = [&](const State& st) {
    return std::fabs(st.y) > opt.max_state || std::fabs(st.yp) > opt.max_state;
  };

  while (dir * (z_final - z) > 0) {
    if (traj.steps_accepted + traj.steps_rejected > opt.max_steps) {
      traj.halted_singular = true;
      traj.halt_reason = "step budget exhausted";
      break;
    }
    if (dir * (z + h - z_final) > 0) h = z_final - z;
    if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(z))) {
      traj.halted_singular = true;
      traj.halt_reason = "step size underflow near singularity";
      break;
    }

    State k2, k3, k4, k5, k6, k7, y1;
    double err;
    try {
      auto axpy = [&](std::initializer_list<std::pair<double, const State*>>
                          terms) {
        State out = s;
        for (auto& [c, k] : terms) {
          out.y += h * c * k->y;
          out.yp += h * c * k->yp;
        }
        return out;
      };
      k2 = rhs(z + c2 * h, axpy({{a21, &k1}}));
      k3 = rhs(z + c3 * h, axpy({{a31, &k1}, {a32, &k2}}));
      k4 = rhs(z + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      k5 = rhs(z + c5 * h,
               axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      k6 = rhs(z + h, axpy({{a61, &k1},
                            {a62, &k2},
                            {a63, &k3},
                            {a64, &k4},
                            {a65, &k5}}));
      y1 = axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      k7 = rhs(z + h, y1);
      State ee{h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y +
                    e6 * k6.y + e7 * k7.y),
               h * (e1 * k1.yp + e3 * k3.yp + e4 * k4.yp + e5 * k5.yp +
                    e6 * k6.yp + e7 * k7.yp)};
      err = std::sqrt(0.5 * (comp(ee.y, s.y, y1.y, opt.rtol, opt.atol) +
                             comp(ee.yp, s.yp, y1.yp, opt.rtol, opt.atol)));
      if (!std::isfinite(err) || !std::isfinite(y1.y) || !std::isfinite(y1.yp))
        err = 10.0;
    } catch (const RhsGuard& e) {
      // A stage hit the guard set; retreat.  Persistent retreats end in the
      // underflow halt above.
      h *= 0.25;
      ++traj.steps_rejected;
      last_rejected = true;
      if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(z))) {
        traj.halted_singular = true;
        traj.halt_reason = std::string("singularity guard: ") + e.what();
        break;
      }
      continue;
    }

    traj.max_error_estimate = std::max(traj.max_error_estimate, err);
    if (err <= 1.0) {
      // Accepted; dense output first so interpolated points come in order.
      DenseCoeffs dense;
      dense.z0 = z;
      dense.h = h;
      double ydiff[2] = {y1.y - s.y, y1.yp - s.yp};
      double bspl[2] = {h * k1.y - ydiff[0], h * k1.yp - ydiff[1]};
      dense.r1[0] = s.y;
      dense.r1[1] = s.yp;
      dense.r2[0] = ydiff[0];
      dense.r2[1] = ydiff[1];
      dense.r3[0] = bspl[0];
      dense.r3[1] = bspl[1];
      dense.r4[0] = ydiff[0] - h * k7.y - bspl[0];
      dense.r4[1] = ydiff[1] - h * k7.yp - bspl[1];
      dense.r5[0] = h * (d1 * k1.y + d3 * k3.y + d4 * k4.y + d5 * k5.y +
                         d6 * k6.y + d7 * k7.y);
      dense.r5[1] = h * (d1 * k1.yp + d3 * k3.yp + d4 * k4.yp + d5 * k5.yp +
                         d6 * k6.yp + d7 * k7.yp);

      double z_new = z + h;
      while (next_dense <= opt.dense_points) {
        double zd = ic.z + next_dense * dense_step;
        if (dir * (zd - z_new) >= 0 || dir * (zd - z) <= 0) break;
        State sd = dense.at(zd);
        traj.samples.push_back({zd, sd.y, sd.yp});
        ++next_dense;
      }

      z = z_new;
      s = y1;
      k1 = k7;  // FSAL
      traj.samples.push_back({z, s.y, s.yp});
      traj.z_end = z;
      ++traj.steps_accepted;

      if (escape(s)) {
        traj.halted_singular = true;
        traj.halt_reason = "state escaped the admissible window";
        break;
      }

      double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      double facmax = last_rejected ? 1.0 : 5.0;
      h *= std::clamp(fac, 0.2, facmax);
      last_rejected = false;
    } else {
      ++traj.steps_rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }

  if (dir * (z_final - z) <= 0) traj.complete = true;
  return traj;
}

Trajectory thin_trajectory(const Trajectory& traj, size_t max_samples) {
  if (max_samples < 2 || traj.samples.size() <= max_samples) return traj;
  Trajectory out = traj;
  out.samples.clear();
  size_t n = traj.samples.size();
  for (size_t i = 0; i < max_samples; ++i) {
    size_t idx = i * (n - 1) / (max_samples - 1);
    out.samples.push_back(traj.samples[idx]);
  }
  return out;
}

double conservation_drift(const FirstIntegral& fi, const Trajectory& traj) {
  if (traj.samples.size() < 2)
    throw std::invalid_argument("trajectory too short for drift");
  double i0 = fi.evaluate(traj.ic.z, traj.ic.y, traj.ic.yp);
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    double v;
    try {
      v = fi.evaluate(smp.z, smp.y, smp.yp);
    } catch (const EvalError&) {
      continue;
    } catch (const QuadratureError&) {
      continue;
    }
    worst = std::max(worst, std::fabs(v - i0) / (1.0 + std::fabs(i0)));
  }
  return worst;
}

}  // namespace laxquad
