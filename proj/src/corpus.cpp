#include "corpus.hpp"

#include <cmath>

namespace laxquad {

namespace {

SystemSpec make_spec(std::string name, std::string f, std::string g,
                     ParamBinding params, SampleDomain dom,
                     InitialCondition ic, double span, Anchor anchor,
                     double max_state = 1e6) {
  SystemSpec s;
  s.name = std::move(name);
  s.f_text = std::move(f);
  s.g_text = std::move(g);
  s.params = std::move(params);
  s.domain = dom;
  s.ic = ic;
  s.span = span;
  s.anchor = anchor;
  s.max_state = max_state;
  return s;
}

std::vector<CorpusFixture> build_corpus() {
  std::vector<CorpusFixture> out;

  // 1. Anharmonic oscillator with nonlinear friction (classical Lienard).
  {
    CorpusFixture fx;
    fx.name = "example1";
    fx.spec = make_spec(
        fx.name, "beta*y/(y^2+1)^2", "alpha*(y^2+1)",
        {{"alpha", 1.0}, {"beta", 1.0}}, SampleDomain{}, {0.0, 0.0, 2.0}, 5.0,
        Anchor{0.0, 0.0, 0.0}, /*max_state=*/60.0);
    fx.expected_case = CaseTag::LienardAutonomous;
    fx.a_reference = "-beta/(2*(y^2+1))";
    fx.b_reference = "(2*alpha/3)*y^3+2*alpha*y-alpha*beta*z";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = fx.spec.f_text;
    fx.control_g = "alpha*(y^2+1.01*y+1)";
    out.push_back(fx);
  }

  // 2. Non-autonomous generic-case system.
  {
    CorpusFixture fx;
    fx.name = "example2";
    fx.spec = make_spec(fx.name, "z/(2*y+z)^2",
                        "alpha^2*(2*y^3+3*z*y^2+z^2*y)-y/(2*y+z)^2",
                        {{"alpha", 1.0}}, SampleDomain{}, {0.5, 1.0, 0.0},
                        5.0, Anchor{0.0, 0.0, 0.0});
    fx.expected_case = CaseTag::Generic;
    fx.a_reference = "y/(2*y+z)";
    fx.b_reference = "alpha^2*y^2*(y+z)^2";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = fx.spec.f_text;
    fx.control_g = "alpha^2*(2*y^3+3*z*y^2+z^2*y)-1.03*y/(2*y+z)^2";
    out.push_back(fx);
  }

  // 3. Damped oscillator that tends to a harmonic one for large z or y.
  {
    CorpusFixture fx;
    fx.name = "example3";
    fx.spec = make_spec(fx.name, "exp(-alpha*z)/(y+delta)^2",
                        "alpha*exp(-alpha*z)/(y+delta)+y+delta",
                        {{"alpha", 1.0}, {"delta", 1.0}}, SampleDomain{},
                        {0.0, 0.5, 0.0}, 5.0, Anchor{0.1, 0.1, 0.0});
    fx.expected_case = CaseTag::PyZero;
    fx.a_reference = "-exp(-alpha*z)/(y+delta)";
    fx.b_reference = "y^2+2*delta*y+(2/alpha)*exp(-alpha*z)";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = "1.03*exp(-alpha*z)/(y+delta)^2";
    fx.control_g = fx.spec.g_text;
    out.push_back(fx);
  }

  // 4. Non-autonomous Van der Pol generalization (generic case, B < 0).
  {
    CorpusFixture fx;
    fx.name = "example4";
    SampleDomain dom;
    dom.y_min = 0.2;
    dom.y_max = 1.6;
    fx.spec = make_spec(fx.name, "-alpha*(1-y^2)",
                        "beta*y*exp(-2*alpha*z)/(y^2-3)^2",
                        {{"alpha", 1.0}, {"beta", -1.0}}, dom,
                        {0.0, 0.3, 0.0}, 5.0, Anchor{0.1, 0.2, 0.0});
    fx.expected_case = CaseTag::Generic;
    fx.a_reference = "alpha*y*(y^2-3)/3";
    fx.b_reference = "-beta*y^2*exp(-2*alpha*z)/(3*(y^2-3))";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = fx.spec.f_text;
    fx.control_g = "beta*y*exp(-2.04*alpha*z)/(y^2-3)^2";
    out.push_back(fx);
  }

  // 5. Van der Pol friction with the matching restoring force (Lienard).
  {
    CorpusFixture fx;
    fx.name = "example5";
    SampleDomain dom;
    dom.y_min = 1.8;
    dom.y_max = 2.4;
    fx.spec = make_spec(fx.name, "-alpha*(1-y^2)", "3*beta/(y*(y^2-3))",
                        {{"alpha", 1.0}, {"beta", 1.0}}, dom,
                        {0.0, 2.0, 3.0}, 5.0, Anchor{0.1, 1.8, 0.0});
    fx.expected_case = CaseTag::LienardAutonomous;
    fx.a_reference = "alpha*y*(y^2-3)/3";
    fx.b_reference = "2*alpha*beta*z-beta*ln(y^2/(y^2-3))";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = "-alpha*(1-1.05*y^2)";
    fx.control_g = fx.spec.g_text;
    out.push_back(fx);
  }

  // 6. Duffing equation with nonlinear friction (classical Lienard).
  {
    CorpusFixture fx;
    fx.name = "example6";
    SampleDomain dom;
    dom.guard = 1e-2;  // halt well before the g = 0 curve
    fx.spec = make_spec(fx.name, "-nu*(3*y^2+alpha)/(y^3+alpha*y+beta)^2",
                        "y^3+alpha*y+beta",
                        {{"alpha", 1.0}, {"beta", 0.1}, {"nu", 0.05}}, dom,
                        {0.0, 0.5, 0.0}, 5.0, Anchor{0.0, 0.0, 0.0});
    fx.expected_case = CaseTag::LienardAutonomous;
    fx.a_reference = "nu/(y^3+alpha*y+beta)";
    fx.b_reference = "y^4/2+alpha*y^2+2*beta*y+2*nu*z";
    fx.u_squared_reference = fx.b_reference;
    fx.control_f = fx.spec.f_text;
    fx.control_g = "y^3+1.02*alpha*y+beta";
    out.push_back(fx);
  }

  return out;
}

}  // namespace

const std::vector<CorpusFixture>& corpus() {
  static const std::vector<CorpusFixture> fixtures = build_corpus();
  return fixtures;
}

double reference_deviation_A(const CorpusFixture& fx, const AnalysisResult& r,
                             int points) {
  Expr ref = parse(fx.a_reference);
  SampleDomain dom = r.sys.domain;
  dom.count = points;
  auto pts = admissible_points(r.sys.f * r.sys.g * ref, dom, r.sys.params);
  double worst = 0.0;
  for (const auto& p : pts) {
    double want = ref.eval(p, dom.guard);
    double got = r.fi->A.value(p.z, p.y);
    worst = std::max(worst, std::fabs(got - want) / (1.0 + std::fabs(want)));
  }
  return worst;
}

double reference_deviation_B(const CorpusFixture& fx, const AnalysisResult& r,
                             int points) {
  Expr ref = parse(fx.b_reference);
  SampleDomain dom = r.sys.domain;
  dom.count = points;
  auto pts = admissible_points(r.sys.f * r.sys.g * ref, dom, r.sys.params);
  // Agreement up to the anchor constant: fix the offset at the first point.
  bool have_offset = false;
  double offset = 0.0, worst = 0.0;
  for (const auto& p : pts) {
    double want = ref.eval(p, dom.guard);
    double got = r.fi->B.value(p.z, p.y);
    if (!have_offset) {
      offset = got - want;
      have_offset = true;
      continue;
    }
    worst = std::max(worst,
                     std::fabs(got - want - offset) / (1.0 + std::fabs(want)));
  }
  return worst;
}

std::vector<AnalysisResult> run_corpus(uint64_t seed) {
  std::vector<AnalysisResult> results;
  for (const auto& fx : corpus()) {
    SystemSpec spec = fx.spec;
    spec.domain.seed = seed;
    AnalysisResult r;
    try {
      r = analyze(spec);
    } catch (const std::exception& e) {
      throw std::runtime_error("fixture " + fx.name + " failed: " + e.what());
    }
    if (r.case_tag != fx.expected_case)
      throw std::runtime_error("fixture " + fx.name + " classified as " +
                               case_name(r.case_tag) + ", expected " +
                               case_name(fx.expected_case));
    double da = reference_deviation_A(fx, r);
    double db = reference_deviation_B(fx, r);
    if (da > 1e-8 || db > 1e-8)
      throw std::runtime_error("fixture " + fx.name +
                               " deviates from its reference forms (A " +
                               std::to_string(da) + ", B " +
                               std::to_string(db) + ")");
    results.push_back(std::move(r));
  }
  return results;
}

std::string corpus_json(uint64_t seed) {
  auto results = run_corpus(seed);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(r.report);
  return arr.dump(2) + "\n";
}

}  // namespace laxquad
