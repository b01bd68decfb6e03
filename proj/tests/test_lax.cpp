#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corpus.hpp"
#include "helpers.hpp"
#include "lax.hpp"

using namespace laxquad;
using namespace laxquad::testing;

namespace {

struct Pack {
  OdeSystem sys;
  ClassifierState st;
  FirstIntegral fi;
  LaxPair lp;
  InitialCondition ic;
  double span;
  double max_state;
};

Pack prepare(int idx) {
  const auto& fx = corpus().at(idx);
  OdeSystem sys(parse(fx.spec.f_text), parse(fx.spec.g_text), fx.spec.params,
                fx.spec.domain);
  auto st = compute_invariants(sys);
  auto [tag, rep] = classify(sys, st);
  REQUIRE(rep.all_pass);
  FirstIntegral fi = build_first_integral(sys, st, tag, *fx.spec.anchor);
  LaxPair lp = build_lax(fi, sys);
  return {sys, st, fi, lp, *fx.spec.ic, fx.spec.span, fx.spec.max_state};
}

}  // namespace

TEST_CASE("closed-form U and M entries") {
  auto p2 = prepare(1);
  REQUIRE(p2.lp.closed_U);
  SampleDomain dom = p2.sys.domain;
  CHECK(is_identically_zero(p2.lp.U_expr - parse("alpha*(y^2+z*y)"), dom,
                            p2.sys.params, 1e-10));
  CHECK(is_identically_zero(p2.lp.M_expr - parse("alpha*(2*y+z)/2"), dom,
                            p2.sys.params, 1e-10));
}

TEST_CASE("the two M forms coincide when B_y = 2g") {
  auto p6 = prepare(5);
  SampleDomain dom = p6.sys.domain;
  dom.count = 20;
  auto pts = admissible_points(p6.sys.f * p6.sys.g, dom, p6.sys.params);
  for (const auto& pt : pts) {
    Complex m = p6.lp.M_offdiag(pt.z, pt.y);
    Complex g = Complex(p6.sys.g.eval(pt));
    Complex u = p6.lp.U(pt.z, pt.y);
    CHECK(std::abs(m - g / (2.0 * u)) <= 1e-10 * (1.0 + std::abs(m)));
  }
}

TEST_CASE("degenerate pairs: constant B means a diagonal L and zero M") {
  auto sys = make_system("2*z*y", "y^2");
  auto st = compute_invariants(sys);
  FirstIntegral fi =
      build_first_integral(sys, st, CaseTag::SZeroTZero, Anchor{0.1, 0.1, 0});
  LaxPair lp = build_lax(fi, sys);
  CHECK(lp.degenerate);
  Matrix2 l = lp.L(0.5, 0.7, 0.2);
  CHECK(std::abs(l[0][1]) == 0.0);
  CHECK(std::abs(l[1][0]) == 0.0);
  Matrix2 m = lp.M(0.5, 0.7);
  CHECK(std::abs(m[0][1]) == 0.0);

  // the diagonal entry is conserved along trajectories by construction
  Trajectory t = integrate(sys, {0.2, 1.0, -0.5}, 1.0);
  LaxResidualReport rep = lax_residual(lp, sys, t);
  CHECK(rep.max_residual <= 1e-7);
}

TEST_CASE("Lax equation residual along corpus trajectories") {
  auto p2 = prepare(1);
  IntegrateOptions opt;
  Trajectory t = integrate(p2.sys, {0.5, 1.0, 0.0}, 3.0, opt);
  REQUIRE(t.complete);
  LaxResidualReport rep = lax_residual(p2.lp, p2.sys, t);
  CHECK(rep.max_residual <= 1e-6);
  CHECK(rep.per_sample.size() + rep.skipped == t.samples.size());
}

TEST_CASE("a wrong M is loudly visible (negative control)") {
  auto p2 = prepare(1);
  IntegrateOptions opt;
  Trajectory t = integrate(p2.sys, {0.5, 1.0, 0.0}, 3.0, opt);
  double worst = 0.0;
  for (const auto& s : t.samples) {
    double f = p2.sys.f.eval({s.z, s.y, &p2.sys.params});
    double g = p2.sys.g.eval({s.z, s.y, &p2.sys.params});
    double ypp = -f * s.yp - g;
    Complex a = Complex(s.yp) + p2.lp.F(s.z, s.y);
    Complex u = p2.lp.U(s.z, s.y);
    Complex da = Complex(ypp + p2.fi.A.dz(s.z, s.y) +
                         p2.fi.A.dy(s.z, s.y) * s.yp);
    Complex du = p2.lp.U_z(s.z, s.y) + p2.lp.U_y(s.z, s.y) * s.yp;
    Complex m = 1.1 * p2.lp.M_offdiag(s.z, s.y);  // wrong on purpose
    double r = std::sqrt(2.0 * std::norm(da + 2.0 * u * m) +
                         2.0 * std::norm(du - 2.0 * a * m));
    worst = std::max(worst, r);
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("complex region is flagged and still verifies") {
  auto p4 = prepare(3);  // B < 0 on its domain
  IntegrateOptions opt;
  Trajectory t = integrate(p4.sys, p4.ic, p4.span, opt);
  LaxResidualReport rep = lax_residual(p4.lp, p4.sys, t);
  CHECK(rep.complex_domain);
  CHECK(rep.max_residual <= 1e-6);
}

TEST_CASE("finite differences corroborate dL/dz (secondary oracle)") {
  auto p2 = prepare(1);
  IntegrateOptions opt;
  double h = 1e-6;
  for (double frac : {0.25, 0.5, 0.75}) {
    // land exactly on a state by short integrations from the fixture IC
    Trajectory t0 = integrate(p2.sys, {0.5, 1.0, 0.0}, 3.0 * frac, opt);
    REQUIRE(t0.complete);
    auto s = t0.samples.back();
    Trajectory tp = integrate(p2.sys, {s.z, s.y, s.yp}, h, opt);
    Trajectory tm = integrate(p2.sys, {s.z, s.y, s.yp}, -h, opt);
    auto sp = tp.samples.back();
    auto sm = tm.samples.back();
    Matrix2 lp_ = p2.lp.L(sp.z, sp.y, sp.yp);
    Matrix2 lm_ = p2.lp.L(sm.z, sm.y, sm.yp);
    // analytic dL/dz at the midpoint
    double f = p2.sys.f.eval({s.z, s.y, &p2.sys.params});
    double g = p2.sys.g.eval({s.z, s.y, &p2.sys.params});
    double ypp = -f * s.yp - g;
    Complex da = Complex(ypp + p2.fi.A.dz(s.z, s.y) +
                         p2.fi.A.dy(s.z, s.y) * s.yp);
    Complex du = p2.lp.U_z(s.z, s.y) + p2.lp.U_y(s.z, s.y) * s.yp;
    Complex fd_a = (lp_[0][0] - lm_[0][0]) / (2.0 * h);
    Complex fd_u = (lp_[0][1] - lm_[0][1]) / (2.0 * h);
    CHECK(std::abs(fd_a - da) <= 1e-5 * (1.0 + std::abs(da)));
    CHECK(std::abs(fd_u - du) <= 1e-5 * (1.0 + std::abs(du)));
  }
}

TEST_CASE("trace invariants") {
  auto p2 = prepare(1);
  // tr L = 0 exactly by the ansatz; odd powers vanish; tr(L^2)/2! = I
  Complex t2 = trace_invariant(p2.lp, 2, 1.0, 1.0, -1.0 / 3);
  CHECK(std::abs(t2 - Complex(4.0)) < 1e-12);          // tr(L^2)/2! = I = 4
  CHECK(std::abs(2.0 * t2 - Complex(8.0)) < 1e-12);    // tr(L^2) = 2I

  SampleDomain dom = p2.sys.domain;
  dom.count = 50;
  SampleRng rng(1);
  for (const auto& pt : admissible_points(p2.sys.f * p2.sys.g, dom,
                                          p2.sys.params)) {
    double yp = rng.uniform(-2.0, 2.0);
    for (int k : {1, 3, 5, 7})
      CHECK(std::abs(trace_invariant(p2.lp, k, pt.z, pt.y, yp)) <= 1e-12);
    Complex tr2 = trace_invariant(p2.lp, 2, pt.z, pt.y, yp);
    double ival = p2.fi.evaluate(pt.z, pt.y, yp);
    CHECK(std::abs(tr2 - Complex(ival)) <= 1e-9 * (1.0 + std::fabs(ival)));
  }
  CHECK_THROWS_AS(trace_invariant(p2.lp, 9, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("M is antisymmetric everywhere") {
  for (int idx : {1, 3, 5}) {
    auto p = prepare(idx);
    SampleDomain dom = p.sys.domain;
    dom.count = 20;
    for (const auto& pt : admissible_points(p.sys.f * p.sys.g, dom,
                                            p.sys.params)) {
      Matrix2 m = p.lp.M(pt.z, pt.y);
      CHECK(std::abs(m[0][0]) == 0.0);
      CHECK(std::abs(m[1][1]) == 0.0);
      CHECK(std::abs(m[0][1] + m[1][0]) <= 1e-14 * (1.0 + std::abs(m[0][1])));
    }
  }
}

TEST_CASE("eigenvalues are +/- sqrt(I) and constant along trajectories") {
  auto p2 = prepare(1);
  auto [lp_, lm_] = eigenvalues(p2.lp, 1.0, 1.0, -1.0 / 3);
  CHECK(std::abs(lp_ - Complex(2.0)) < 1e-12);
  CHECK(std::abs(lm_ + Complex(2.0)) < 1e-12);

  // y' = -F with B = 0 gives a double zero eigenvalue
  auto sys = make_system("2*z*y", "y^2");
  auto st = compute_invariants(sys);
  FirstIntegral fi =
      build_first_integral(sys, st, CaseTag::SZeroTZero, Anchor{0.1, 0.1, 0});
  LaxPair lp0 = build_lax(fi, sys);
  double a = fi.A.value(0.6, 0.9);
  auto [z1, z2] = eigenvalues(lp0, 0.6, 0.9, -a);
  CHECK(std::abs(z1) < 1e-12);
  CHECK(std::abs(z2) < 1e-12);

  // isospectrality along the anharmonic-oscillator trajectory
  auto p1 = prepare(0);
  IntegrateOptions opt;
  opt.max_state = p1.max_state;
  Trajectory t = integrate(p1.sys, p1.ic, p1.span, opt);
  Complex l0 = eigenvalues(p1.lp, t.ic.z, t.ic.y, t.ic.yp).first;
  for (const auto& s : t.samples) {
    Complex l = eigenvalues(p1.lp, s.z, s.y, s.yp).first;
    CHECK(std::abs(l - l0) <= 1e-6 * (1.0 + std::abs(l0)));
  }
}

TEST_CASE("build_lax enforces the defining-relation gate") {
  auto p1 = prepare(0);
  auto broken = make_system("beta*y/(y^2+1)^2", "alpha*(y^2+1.01*y+1)",
                            p1.sys.params);
  auto st = compute_invariants(broken);
  FirstIntegral bad = build_first_integral(
      broken, st, CaseTag::LienardAutonomous, p1.fi.anchor, /*strict=*/false);
  CHECK_THROWS_AS(build_lax(bad, broken), BuildLaxError);
  CHECK_NOTHROW(build_lax(bad, broken, 1e-6, /*strict=*/false));
}
