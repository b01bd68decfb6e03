#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace laxquad {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& fn, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = fn(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = fn(c - x);
    double f2 = fn(c + x);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  result_k *= h;
  result_g *= h;
  return {result_k, std::fabs(result_k - result_g)};
}

}  // namespace

double integrate_gk(const std::function<double(double)>& fn, double a,
                    double b, double abs_tol, int max_panels) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  struct Panel {
    double a, b, integral, error;
  };
  PanelResult whole = gk15(fn, a, b);
  std::vector<Panel> panels{{a, b, whole.integral, whole.error}};
  int used = 1;
  for (;;) {
    double total_err = 0.0;
    size_t worst = 0;
    for (size_t i = 0; i < panels.size(); ++i) {
      total_err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (total_err <= abs_tol) break;
    if (used >= max_panels)
      throw QuadratureError("quadrature failed to converge (error " +
                            std::to_string(total_err) + ")");
    Panel p = panels[worst];
    double m = 0.5 * (p.a + p.b);
    if (m == p.a || m == p.b)
      throw QuadratureError("quadrature panel underflow near " +
                            std::to_string(p.a));
    PanelResult left = gk15(fn, p.a, m);
    PanelResult right = gk15(fn, m, p.b);
    panels[worst] = {p.a, m, left.integral, left.error};
    panels.push_back({m, p.b, right.integral, right.error});
    ++used;
  }
  double total = 0.0;
  // Deterministic summation order.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) total += p.integral;
  if (!std::isfinite(total))
    throw QuadratureError("non-finite quadrature result");
  return sign * total;
}

double integrate_scalar_ode(const std::function<double(double, double)>& rhs,
                            double s0, double s1, double v0, double rtol,
                            double atol) {
  if (s0 == s1) return v0;
  // Classic Cash-Karp style embedded 4(5) would do; Dormand-Prince
  // coefficients are already needed elsewhere, reuse them here on a scalar.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double dir = s1 > s0 ? 1.0 : -1.0;
  double s = s0, v = v0;
  double h = dir * std::max(1e-8, 0.05 * std::fabs(s1 - s0));
  int steps = 0;
  while (dir * (s1 - s) > 0) {
    if (++steps > 1000000)
      throw QuadratureError("field leg integration exceeded step budget");
    if (dir * (s + h - s1) > 0) h = s1 - s;
    double k1 = rhs(s, v);
    double k2 = rhs(s + h * 0.2, v + h * a21 * k1);
    double k3 = rhs(s + h * 0.3, v + h * (a31 * k1 + a32 * k2));
    double k4 = rhs(s + h * 0.8, v + h * (a41 * k1 + a42 * k2 + a43 * k3));
    double k5 = rhs(s + h * (8.0 / 9),
                    v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    double k6 =
        rhs(s + h, v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                            a65 * k5));
    double vn = v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    double k7 = rhs(s + h, vn);
    double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                      e7 * k7);
    double sc = atol + rtol * std::max(std::fabs(v), std::fabs(vn));
    double ratio = std::fabs(err) / sc;
    if (!std::isfinite(vn)) ratio = 2.0;
    if (ratio <= 1.0) {
      s += h;
      v = vn;
      double fac = ratio > 0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(ratio, -0.2));
      if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(s)))
        throw QuadratureError("field leg step underflow");
    }
  }
  return v;
}

// Field legs are smooth away from declared singular sets; a few hundred
// panels is ample, and ill-posed integrands (negative controls) fail fast.
constexpr int kMaxPanels = 240;

QuadratureField::QuadratureField(Partial wz, Partial wy, double z0, double y0,
                                 double w0, double abs_tol)
    : wz_(std::move(wz)),
      wy_(std::move(wy)),
      z0_(z0),
      y0_(y0),
      w0_(w0),
      abs_tol_(abs_tol) {}

QuadratureField::QuadratureField(Coupled wz_coupled, Partial wy, double z0,
                                 double y0, double w0, double abs_tol)
    : wy_(std::move(wy)),
      wz_coupled_(std::move(wz_coupled)),
      z0_(z0),
      y0_(y0),
      w0_(w0),
      abs_tol_(abs_tol) {}

double QuadratureField::zleg(double z) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = zleg_cache_.find(z);
    if (it != zleg_cache_.end()) return it->second;
  }
  double v;
  if (wz_coupled_) {
    v = integrate_scalar_ode(
        [&](double s, double w) { return wz_coupled_(s, y0_, w); }, z0_, z,
        w0_);
  } else {
    v = w0_ + integrate_gk([&](double s) { return wz_(s, y0_); }, z0_, z,
                           abs_tol_, kMaxPanels);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  zleg_cache_.emplace(z, v);
  return v;
}

double QuadratureField::value(double z, double y) const {
  double base = zleg(z);
  if (y == y0_) return base;
  return base + integrate_gk([&](double t) { return wy_(z, t); }, y0_, y,
                             abs_tol_, kMaxPanels);
}

double QuadratureField::value_other_path(double z, double y) const {
  if (wz_coupled_)
    throw QuadratureError(
        "other-path evaluation undefined for value-coupled fields");
  double base = w0_ + integrate_gk([&](double t) { return wy_(z0_, t); },
                                   y0_, y, abs_tol_, kMaxPanels);
  return base + integrate_gk([&](double s) { return wz_(s, y); }, z0_, z,
                             abs_tol_, kMaxPanels);
}

}  // namespace laxquad
