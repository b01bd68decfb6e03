#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "lax.hpp"

namespace laxquad {

inline constexpr const char* kToolName = "laxquad";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Pinned verification tolerances.
struct Tolerances {
  double condition = 1e-9;
  double it5 = 1e-8;
  double oracle = 1e-8;
  double lax = 1e-6;
  double drift = 1e-7;
  double isospectral = 1e-6;
  double trace_odd = 1e-12;   // absolute
  double trace_even = 1e-9;   // relative, tr(L^2)/2 vs I
};

// Everything cmd_analyze needs to run; mirrors the CLI surface.
struct SystemSpec {
  std::string f_text;
  std::string g_text;
  ParamBinding params;
  SampleDomain domain;
  std::optional<InitialCondition> ic;
  double span = 5.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::optional<Anchor> anchor;
  double max_state = 1e6;
  std::string name;  // optional label carried into reports
};

struct Verdicts {
  bool conditions = false;
  bool it5 = false;
  bool lax = false;
  bool drift = false;
  bool isospectral = false;
  bool traces = false;
  bool oracle = false;
  bool all() const {
    return conditions && it5 && lax && drift && isospectral && traces &&
           oracle;
  }
};

struct AnalysisResult {
  SystemSpec spec;
  OdeSystem sys;
  CaseTag case_tag = CaseTag::NoQuadraticIntegral;
  ConditionReport conditions;
  std::optional<FirstIntegral> fi;
  std::optional<LaxPair> lax;
  It5Residuals it5;
  double oracle_residual = 0.0;
  LaxResidualReport lax_report;
  Trajectory traj;
  double drift = 0.0;
  double isospectral_drift = 0.0;
  double trace_odd_max = 0.0;
  double trace_even_rel = 0.0;
  Verdicts verdicts;
  int exit_code = 0;
  nlohmann::json report;
};

// Full pipeline: classify -> first integral -> Lax pair -> trajectory ->
// residual/drift suite -> report.  Throws ParseError, InvalidSystem,
// DomainCoverageError, CrossCheckError; a clean negative classification is
// not an error (exit_code 2).
AnalysisResult analyze(const SystemSpec& spec,
                       const Tolerances& tol = Tolerances());

// The four Proposition-style verdicts for a system forced through the given
// case's formulas (used for negative controls and oracle agreement; cross
// checks are disabled so failure magnitudes can be measured).
struct JointVerdicts {
  double condition_residual = 0.0;
  double it5_residual = 0.0;
  double lax_residual = 0.0;
  double drift = 0.0;
  bool conditions_pass = false;
  bool it5_pass = false;
  bool lax_pass = false;
  bool drift_pass = false;
  bool constructed = false;  // formulas were evaluable at all

  bool all_pass() const {
    return conditions_pass && it5_pass && lax_pass && drift_pass;
  }
  bool all_fail() const {
    return !conditions_pass && !it5_pass && !lax_pass && !drift_pass;
  }
};
JointVerdicts joint_verdicts(const OdeSystem& sys, CaseTag tag,
                             const Anchor& anchor, const InitialCondition& ic,
                             double span, const IntegrateOptions& opt,
                             const Tolerances& tol = Tolerances());

// Serializers for the CLI emit formats.
std::string report_to_json_text(const nlohmann::json& report);
std::string analysis_to_latex(const AnalysisResult& r);
std::string trajectory_to_csv(const AnalysisResult& r);

// Exit-code mapping shared by the C API and the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitNoIntegral = 2;
inline constexpr int kExitParse = 64;
inline constexpr int kExitDomain = 65;
inline constexpr int kExitCrossCheck = 70;

}  // namespace laxquad
