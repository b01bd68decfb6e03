#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace laxquad {

struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what)
      : std::runtime_error(what) {}
};

// Adaptive Gauss-Kronrod 7(15) panels, bisected until the per-panel error
// estimate meets the tolerance.  abs_tol is per call (whole interval).
double integrate_gk(const std::function<double(double)>& fn, double a,
                    double b, double abs_tol = 1e-12, int max_panels = 4000);

// Adaptive embedded RK step for a scalar ODE dv/ds = rhs(s, v); used for
// field legs whose integrand depends on the accumulated value.
double integrate_scalar_ode(const std::function<double(double, double)>& rhs,
                            double s0, double s1, double v0,
                            double rtol = 1e-12, double atol = 1e-13);

// Scalar field W(z, y) defined by its partials and an anchor value, evaluated
// along the axis-aligned path (z0,y0) -> (z,y0) -> (z,y).  The z-leg
// integrand may depend on the accumulated value W itself (coupled form
// W_z = base(z,y) - W*k(z,y)); the y-leg is a plain quadrature of W_y.
class QuadratureField {
 public:
  using Partial = std::function<double(double z, double y)>;
  using Coupled = std::function<double(double z, double y, double w)>;

  // Plain exact-differential field: W_z and W_y given directly.
  QuadratureField(Partial wz, Partial wy, double z0, double y0, double w0,
                  double abs_tol = 1e-12);

  // Coupled z-leg: W_z = coupled(z, y, W).  W_y still a plain partial.
  QuadratureField(Coupled wz_coupled, Partial wy, double z0, double y0,
                  double w0, double abs_tol = 1e-12);

  double value(double z, double y) const;

  // Path consistency probe: evaluates via the other leg order
  // (z0,y0) -> (z0,y) -> (z,y); only available for the uncoupled form.
  double value_other_path(double z, double y) const;

  double z0() const { return z0_; }
  double y0() const { return y0_; }
  double w0() const { return w0_; }
  double tol() const { return abs_tol_; }

 private:
  double zleg(double z) const;

  Partial wz_, wy_;
  Coupled wz_coupled_;
  double z0_, y0_, w0_;
  double abs_tol_;

  // Memoized z-leg values; deterministic and synchronized.
  mutable std::mutex mutex_;
  mutable std::map<double, double> zleg_cache_;
};

}  // namespace laxquad
