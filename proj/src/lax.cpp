#include "lax.hpp"

#include <cmath>

#include "polynomial.hpp"

namespace laxquad {

namespace {

Matrix2 matmul(const Matrix2& a, const Matrix2& b) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return out;
}

Matrix2 matsub(const Matrix2& a, const Matrix2& b) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

double frobenius(const Matrix2& a) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += std::norm(a[i][j]);
  return std::sqrt(s);
}

// Symbolic square root of a nonnegative rational closed form, when it is a
// perfect square p^2/q^2; lets U print the way the source material writes it.
std::optional<Expr> symbolic_sqrt(const Expr& b) {
  if (!b.is_rational_tree()) return std::nullopt;
  try {
    RationalForm f = to_rational_form(b);
    auto num_root = f.num.sqrt_exact();
    if (!num_root) return std::nullopt;
    if (f.den.is_constant()) {
      // Canonical scaling makes a constant denominator exactly one.
      return num_root->to_expr(f.vars);
    }
    auto den_root = f.den.sqrt_exact();
    if (!den_root) return std::nullopt;
    return num_root->to_expr(f.vars) / den_root->to_expr(f.vars);
  } catch (const NotRational&) {
    return std::nullopt;
  } catch (const ExactOverflow&) {
    return std::nullopt;
  }
}

}  // namespace

Complex LaxPair::U(double z, double y) const {
  if (degenerate) return Complex(0.0);
  return std::sqrt(Complex(fi.B.value(z, y)));
}

Complex LaxPair::U_y(double z, double y) const {
  if (degenerate) return Complex(0.0);
  Complex u = U(z, y);
  if (u == Complex(0.0)) throw EvalError("U vanishes; U_y undefined");
  return Complex(fi.B.dy(z, y)) / (2.0 * u);
}

Complex LaxPair::U_z(double z, double y) const {
  if (degenerate) return Complex(0.0);
  Complex u = U(z, y);
  if (u == Complex(0.0)) throw EvalError("U vanishes; U_z undefined");
  return Complex(fi.B.dz(z, y)) / (2.0 * u);
}

Complex LaxPair::M_offdiag(double z, double y) const {
  if (degenerate) return Complex(0.0);
  Complex u = U(z, y);
  if (u == Complex(0.0)) throw EvalError("U vanishes; M undefined");
  return Complex(fi.B.dy(z, y)) / (4.0 * u);
}

Matrix2 LaxPair::L(double z, double y, double yp) const {
  Complex a = Complex(yp) + F(z, y);
  Complex u = U(z, y);
  return Matrix2{{{a, u}, {u, -a}}};
}

Matrix2 LaxPair::M(double z, double y) const {
  Complex m = M_offdiag(z, y);
  return Matrix2{{{Complex(0.0), m}, {-m, Complex(0.0)}}};
}

LaxPair build_lax(const FirstIntegral& fi, const OdeSystem& sys, double tol,
                  bool strict) {
  if (strict) {
    It5Residuals res = it5_residuals(sys, fi);
    if (!res.pass(tol))
      throw BuildLaxError("first integral fails its defining relations (" +
                          std::to_string(res.max()) + ")");
  }
  LaxPair lp;
  lp.fi = fi;
  lp.params = std::make_shared<const ParamBinding>(sys.params);
  if (fi.B.is_closed() && fi.B.expr().is_zero()) {
    lp.degenerate = true;
    return lp;
  }
  if (fi.B.is_closed()) {
    if (auto u = symbolic_sqrt(fi.B.expr())) {
      lp.closed_U = true;
      lp.U_expr = *u;
      Expr m = fi.B.expr().diff(Var::Y) / (4 * *u);
      NormalizedRational nm = normalize_rational(m);
      lp.M_expr = nm.was_rational ? nm.expr : m;
    } else {
      lp.closed_U = true;
      lp.U_expr = Expr::sqrt(fi.B.expr());
      lp.M_expr = fi.B.expr().diff(Var::Y) / (4 * lp.U_expr);
    }
  }
  return lp;
}

LaxResidualReport lax_residual(const LaxPair& lp, const OdeSystem& sys,
                               const Trajectory& traj) {
  LaxResidualReport rep;
  for (const auto& smp : traj.samples) {
    double z = smp.z, y = smp.y, yp = smp.yp;
    try {
      double f = sys.f.eval({z, y, &sys.params}, sys.domain.guard);
      double g = sys.g.eval({z, y, &sys.params}, sys.domain.guard);
      double ypp = -f * yp - g;

      Complex a = Complex(yp) + lp.F(z, y);
      Complex u = lp.degenerate ? Complex(0.0) : lp.U(z, y);
      if (std::imag(u) != 0.0) rep.complex_domain = true;

      // d/dz (y' + F) = y'' + F_z + F_y y'
      Complex da = Complex(ypp) + Complex(lp.fi.A.dz(z, y)) +
                   Complex(lp.fi.A.dy(z, y) * yp);
      // d/dz U = U_z + U_y y'
      Complex du(0.0);
      Complex m(0.0);
      if (!lp.degenerate) {
        Complex uz = lp.U_z(z, y);
        Complex uy = lp.U_y(z, y);
        du = uz + uy * yp;
        m = lp.M_offdiag(z, y);
      }
      // [L, M] = [[-2 u m, 2 a m], [2 a m, 2 u m]]
      Matrix2 dL{{{da, du}, {du, -da}}};
      Matrix2 comm{{{-2.0 * u * m, 2.0 * a * m},
                    {2.0 * a * m, 2.0 * u * m}}};
      double r = frobenius(matsub(dL, comm));
      rep.per_sample.push_back(r);
      rep.max_residual = std::max(rep.max_residual, r);
    } catch (const EvalError&) {
      ++rep.skipped;
    } catch (const QuadratureError&) {
      ++rep.skipped;
    }
  }
  return rep;
}

LaxResidualReport lax_residual_fd(const LaxPair& lp, const OdeSystem& sys,
                                  const Trajectory& traj, double h) {
  LaxResidualReport rep;
  IntegrateOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  opt.dense_points = 1;
  const SampleDomain& dom = sys.domain;
  for (const auto& smp : traj.samples) {
    // Differences are only meaningful inside the declared admissible
    // rectangle; outside it the entries may vary too fast for the step.
    if (smp.z < dom.z_min || smp.z > dom.z_max || smp.y < dom.y_min ||
        smp.y > dom.y_max) {
      ++rep.skipped;
      continue;
    }
    try {
      // sqrt(B) has unbounded slope at the branch point; skip samples whose
      // |B| is small relative to its motion over the difference step.
      if (!lp.degenerate) {
        double b = lp.fi.B.value(smp.z, smp.y);
        double bdot = lp.fi.B.dz(smp.z, smp.y) +
                      lp.fi.B.dy(smp.z, smp.y) * smp.yp;
        double floor = 0.03 * std::pow(std::fabs(bdot) + 1e-12, 1.2);
        if (std::fabs(b) < floor) {
          ++rep.skipped;
          continue;
        }
      }
      Trajectory fwd = integrate(sys, {smp.z, smp.y, smp.yp}, h, opt);
      Trajectory bwd = integrate(sys, {smp.z, smp.y, smp.yp}, -h, opt);
      if (!fwd.complete || !bwd.complete) {
        ++rep.skipped;
        continue;
      }
      const auto& sp = fwd.samples.back();
      const auto& sm = bwd.samples.back();
      Matrix2 lp_ = lp.L(sp.z, sp.y, sp.yp);
      Matrix2 lm_ = lp.L(sm.z, sm.y, sm.yp);
      Complex u = lp.degenerate ? Complex(0.0) : lp.U(smp.z, smp.y);
      if (std::imag(u) != 0.0) rep.complex_domain = true;
      Complex a = Complex(smp.yp) + lp.F(smp.z, smp.y);
      Complex m = lp.degenerate ? Complex(0.0) : lp.M_offdiag(smp.z, smp.y);
      Complex fd_a = (lp_[0][0] - lm_[0][0]) / (2.0 * h);
      Complex fd_u = (lp_[0][1] - lm_[0][1]) / (2.0 * h);
      double r = std::sqrt(2.0 * std::norm(fd_a - (-2.0 * u * m)) +
                           2.0 * std::norm(fd_u - 2.0 * a * m));
      rep.per_sample.push_back(r);
      rep.max_residual = std::max(rep.max_residual, r);
    } catch (const std::exception&) {
      ++rep.skipped;
    }
  }
  return rep;
}

Complex trace_invariant(const LaxPair& lp, int k, double z, double y,
                        double yp) {
  if (k < 1 || k > 8) throw std::invalid_argument("k must be in [1, 8]");
  Matrix2 l = lp.L(z, y, yp);
  Matrix2 p = l;
  for (int i = 1; i < k; ++i) p = matmul(p, l);
  Complex tr = p[0][0] + p[1][1];
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return tr / fact;
}

std::pair<Complex, Complex> eigenvalues(const LaxPair& lp, double z, double y,
                                        double yp) {
  Complex a = Complex(yp) + lp.F(z, y);
  Complex u = lp.degenerate ? Complex(0.0) : lp.U(z, y);
  Complex lambda = std::sqrt(a * a + u * u);
  return {lambda, -lambda};
}

}  // namespace laxquad
