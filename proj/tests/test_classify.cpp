#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "helpers.hpp"

using namespace laxquad;
using namespace laxquad::testing;

namespace {

OdeSystem fixture_system(int idx) {
  const auto& fx = corpus().at(idx);
  return OdeSystem(parse(fx.spec.f_text), parse(fx.spec.g_text),
                   fx.spec.params, fx.spec.domain);
}

}  // namespace

TEST_CASE("system invariants are enforced") {
  CHECK_THROWS_AS(make_system("0", "y^2").validate(), InvalidSystem);
  CHECK_THROWS_AS(make_system("y-y", "y^2").validate(), InvalidSystem);
  CHECK_THROWS_AS(make_system("1", "y+1").validate(), InvalidSystem);  // linear
  CHECK_NOTHROW(make_system("1", "y^3").validate());
}

TEST_CASE("invariant computation on the corpus") {
  // P_y vanishes identically for the damped-oscillator fixture
  auto st3 = compute_invariants(fixture_system(2));
  CHECK(st3.flags.Py_zero);
  CHECK(st3.flags.S_zero);
  CHECK_FALSE(st3.flags.T_zero);
  CHECK_FALSE(st3.flags.D_zero);

  // f = -alpha(1-y^2): f_y = 2 alpha y
  auto st4 = compute_invariants(fixture_system(3));
  CHECK_FALSE(st4.flags.fy_zero);
  SampleDomain dom = corpus()[3].spec.domain;
  CHECK(is_identically_zero(st4.f_y - parse("2*alpha*y"), dom,
                            corpus()[3].spec.params));

  CHECK(compute_invariants(fixture_system(0)).flags.autonomous);
  CHECK_FALSE(compute_invariants(fixture_system(1)).flags.autonomous);
}

TEST_CASE("the six fixtures classify as published") {
  CaseTag expected[6] = {CaseTag::LienardAutonomous, CaseTag::Generic,
                         CaseTag::PyZero,            CaseTag::Generic,
                         CaseTag::LienardAutonomous, CaseTag::LienardAutonomous};
  for (int i = 0; i < 6; ++i) {
    auto sys = fixture_system(i);
    auto [tag, rep] = classify(sys);
    CHECK_MESSAGE(tag == expected[i], corpus()[i].name, " -> ",
                  case_name(tag));
    CHECK(rep.all_pass);
    CHECK(rep.max_residual() <= 1e-9);
  }
}

TEST_CASE("perturbed coefficients are rejected with residual evidence") {
  auto sys = make_system("beta*y/(y^2+1)^2", "alpha*(y^2+1.01*y+1)",
                         {{"alpha", 1.0}, {"beta", 1.0}});
  auto [tag, rep] = classify(sys);
  CHECK(tag == CaseTag::NoQuadraticIntegral);
  CHECK(rep.dispatched_case == CaseTag::LienardAutonomous);
  CHECK(rep.max_residual() > 1e-3);
}

TEST_CASE("dispatch depends only on the flag pattern (seed stability)") {
  for (int i = 0; i < 6; ++i) {
    auto base = fixture_system(i);
    auto [tag0, rep0] = classify(base);
    for (uint64_t seed : {11ull, 137ull, 20260808ull}) {
      auto sys = base;
      sys.domain.seed = seed;
      auto [tag, rep] = classify(sys);
      CHECK(tag == tag0);
    }
  }
}

TEST_CASE("re-binding parameters never changes the dispatch path") {
  struct Draw {
    const char* name;
    double v;
  };
  SampleRng rng(5150);
  for (int i = 0; i < 6; ++i) {
    auto base = fixture_system(i);
    auto [tag0, rep0] = classify(base);
    for (int draw = 0; draw < 5; ++draw) {
      auto sys = base;
      for (auto& [name, value] : sys.params)
        value *= rng.uniform(0.5, 1.8);
      auto [tag, rep] = classify(sys);
      CHECK_MESSAGE(tag == tag0, corpus()[i].name, " draw ", draw);
    }
  }
}

TEST_CASE("check_case_conditions honours the requested case") {
  // correct case passes
  auto sys4 = fixture_system(3);
  auto st4 = compute_invariants(sys4);
  auto rep = check_case_conditions(sys4, st4, CaseTag::Generic);
  CHECK(rep.precondition_ok);
  CHECK(rep.all_pass);

  auto sys6 = fixture_system(5);
  auto st6 = compute_invariants(sys6);
  auto rep6 = check_case_conditions(sys6, st6, CaseTag::LienardAutonomous);
  CHECK(rep6.all_pass);

  // wrong case is flagged as a precondition violation, not an error
  auto sys2 = fixture_system(1);
  auto st2 = compute_invariants(sys2);
  auto rep2 = check_case_conditions(sys2, st2, CaseTag::FyZero);
  CHECK_FALSE(rep2.precondition_ok);
  CHECK(rep2.note.find("f_y") != std::string::npos);
}

TEST_CASE("synthetic members of the cases without corpus coverage") {
  // f_y = 0 with essential y-dependence in g
  auto fy0 = make_system("1", "2*y^3*exp(4*z)", {},
                         SampleDomain{0.1, 1.0, 0.1, 2.0});
  auto [t1, r1] = classify(fy0);
  CHECK(t1 == CaseTag::FyZero);
  CHECK(r1.max_residual() <= 1e-9);

  // exact differential pair: f_z = g_y
  auto st0 = make_system("2*z*y", "y^2");
  auto [t2, r2] = classify(st0);
  CHECK(t2 == CaseTag::SZeroTZero);
  CHECK(r2.all_pass);

  // S = 0 with P_y = c(z) f_y, c != 0: lands in the general S-zero branch
  // and fails its conditions (no quadratic first integral there).
  auto s0 = make_system("exp(-alpha*z)/(y+delta)^2",
                        "(alpha+1/2)*exp(-alpha*z)/(y+delta)+y+delta",
                        {{"alpha", 1.0}, {"delta", 1.0}});
  auto st = compute_invariants(s0);
  CHECK(st.flags.S_zero);
  CHECK_FALSE(st.flags.Py_zero);
  CHECK_FALSE(st.flags.T_zero);
  CHECK_FALSE(st.flags.D_zero);
  CHECK_FALSE(st.flags.fy_zero);
  auto [t3, r3] = classify(s0);
  CHECK(r3.dispatched_case == CaseTag::SZero);
  CHECK(t3 == CaseTag::NoQuadraticIntegral);
  CHECK(r3.max_residual() > 1e-3);
}

TEST_CASE("autonomous systems with constant g route through the exact pair") {
  // g_y = 0 excludes the Lienard formulas; the general branch handles it.
  auto sys = make_system("2*y", "3");
  auto [tag, rep] = classify(sys);
  CHECK(tag == CaseTag::SZeroTZero);
  CHECK(rep.all_pass);
}

TEST_CASE("Lienard-constructed systems classify as Lienard") {
  std::mt19937_64 rng(777);
  int built = 0;
  for (int i = 0; i < 20 && built < 10; ++i) {
    Expr f = random_poly_y(rng, 4);
    ParamBinding pb;
    SampleDomain dom;
    if (is_identically_zero(f, dom, pb)) continue;
    Expr g;
    try {
      g = lienard_g_from_f(f, Expr::rational(Rational(1, 10)),
                           Expr::integer(2), pb);
    } catch (const std::exception&) {
      continue;
    }
    OdeSystem sys(f, g, pb, dom);
    try {
      sys.validate();
    } catch (const InvalidSystem&) {
      continue;
    }
    auto [tag, rep] = classify(sys);
    CHECK_MESSAGE(tag == CaseTag::LienardAutonomous, "f = ", f.print());
    ++built;
  }
  CHECK(built == 10);

  // and through the other constructor
  int built_g = 0;
  for (int i = 0; i < 20 && built_g < 5; ++i) {
    Expr g = random_poly_y(rng, 3) * random_poly_y(rng, 1) + Expr::integer(3);
    Expr f;
    try {
      f = lienard_f_from_g(g, Expr::rational(Rational(1, 20)), {});
    } catch (const std::exception&) {
      continue;
    }
    SampleDomain dom;
    dom.guard = 1e-2;
    OdeSystem sys(f, g, {}, dom);
    try {
      sys.validate();
    } catch (const InvalidSystem&) {
      continue;
    }
    auto [tag, rep] = classify(sys);
    CHECK_MESSAGE(tag == CaseTag::LienardAutonomous, "g = ", g.print());
    ++built_g;
  }
  CHECK(built_g == 5);
}
