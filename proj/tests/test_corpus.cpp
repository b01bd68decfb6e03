#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"

using namespace laxquad;

TEST_CASE("all fixtures analyze, classify and match their references") {
  auto results = run_corpus(7);
  REQUIRE(results.size() == 6);
  const char* cases[6] = {"LienardAutonomous", "Generic", "PyZero",
                          "Generic", "LienardAutonomous", "LienardAutonomous"};
  for (int i = 0; i < 6; ++i) {
    CHECK(std::string(case_name(results[i].case_tag)) == cases[i]);
    CHECK(results[i].exit_code == 0);
    CHECK(results[i].verdicts.all());
  }
  // closed forms where the term-wise rule applies, quadrature elsewhere
  CHECK(results[0].fi->B.is_closed());
  CHECK(results[1].fi->B.is_closed());
  CHECK(results[5].fi->B.is_closed());
  CHECK_FALSE(results[2].fi->B.is_closed());
  CHECK_FALSE(results[3].fi->B.is_closed());
  CHECK_FALSE(results[4].fi->B.is_closed());

  // the Van der Pol generalization runs through the complex-U region
  CHECK(results[3].lax_report.complex_domain);

  // reports are self-contained JSON with the pinned schema
  for (const auto& r : results) {
    CHECK(r.report["schema_version"] == kSchemaVersion);
    CHECK(r.report.contains("system"));
    CHECK(r.report.contains("classification"));
    CHECK(r.report.contains("first_integral"));
    CHECK(r.report.contains("lax"));
    CHECK(r.report.contains("trajectory"));
    CHECK(r.report["seed"] == 7);
  }
}

TEST_CASE("published closed forms at pinned parameters") {
  auto results = run_corpus(7);
  for (size_t i = 0; i < corpus().size(); ++i) {
    CAPTURE(corpus()[i].name);
    CHECK(reference_deviation_A(corpus()[i], results[i]) <= 1e-8);
    CHECK(reference_deviation_B(corpus()[i], results[i]) <= 1e-8);
  }
}

TEST_CASE("latex emission shows the closed entries for the generic fixture") {
  auto results = run_corpus(7);
  std::string tex = analysis_to_latex(results[1]);
  CHECK(tex.find("pmatrix") != std::string::npos);
  // L diagonal carries y_z + A with A = y/(2y+z)
  CHECK(tex.find("y_z + \\frac{y}{z+2 y}") != std::string::npos);
  // U = alpha(y^2 + zy) appears in closed form
  CHECK(tex.find("\\alpha") != std::string::npos);
}

TEST_CASE("csv export keeps the first integral constant") {
  auto results = run_corpus(7);
  std::string csv = trajectory_to_csv(results[0]);
  REQUIRE(csv.rfind("z,y,yp,I\n", 0) == 0);
  // parse the I column and compare first/last finite values
  std::vector<double> ivals;
  size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) break;
    std::string line = csv.substr(pos, eol - pos);
    size_t comma = line.rfind(',');
    double v = std::strtod(line.c_str() + comma + 1, nullptr);
    if (std::isfinite(v)) ivals.push_back(v);
    pos = eol + 1;
  }
  REQUIRE(ivals.size() > 100);
  for (double v : ivals)
    CHECK(std::fabs(v - ivals.front()) <= 1e-7 * (1.0 + std::fabs(ivals.front())));
}
