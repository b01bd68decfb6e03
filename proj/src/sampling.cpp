#include "sampling.hpp"

#include <cmath>

#include "polynomial.hpp"

namespace laxquad {

std::vector<EvalPoint> admissible_points(const Expr& probe,
                                         const SampleDomain& dom,
                                         const ParamBinding& params) {
  dom.validate();
  SampleRng rng(dom.seed);
  std::vector<EvalPoint> points;
  points.reserve(dom.count);
  int consecutive_rejections = 0;
  while (points.size() < static_cast<size_t>(dom.count)) {
    EvalPoint p{rng.uniform(dom.z_min, dom.z_max),
                rng.uniform(dom.y_min, dom.y_max), &params};
    try {
      (void)probe.eval(p, dom.guard);
      points.push_back(p);
      consecutive_rejections = 0;
    } catch (const GuardViolation&) {
      if (++consecutive_rejections >= dom.count)
        throw DomainCoverageError(
            "could not find admissible sample points for " +
            probe.print().substr(0, 120));
    }
  }
  return points;
}

double max_relative_residual(const Expr& e, const SampleDomain& dom,
                             const ParamBinding& params) {
  auto points = admissible_points(e, dom, params);
  double worst = 0.0;
  for (const auto& p : points) {
    double scale = 0.0;
    double v = e.eval(p, dom.guard, &scale);
    double rel = std::fabs(v) / (1.0 + scale);
    if (rel > worst) worst = rel;
  }
  return worst;
}

bool is_identically_zero(const Expr& e, const SampleDomain& dom,
                         const ParamBinding& params, double tol) {
  if (e.is_zero()) return true;
  // Exact fast path: a rational tree whose expanded numerator vanishes is
  // zero for every parameter binding.
  if (e.is_rational_tree() && e.node_count() <= 4000) {
    try {
      RationalForm f = to_rational_form(e, 120000);
      if (f.num.is_zero()) return true;
    } catch (const NotRational&) {
    } catch (const ExactOverflow&) {
    }
  }
  return max_relative_residual(e, dom, params) <= tol;
}

}  // namespace laxquad
