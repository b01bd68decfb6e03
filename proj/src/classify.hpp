#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ode_system.hpp"

namespace laxquad {

enum class CaseTag {
  Generic,
  FyZero,
  SZero,
  SZeroTZero,
  DZero,
  PyZero,
  LienardAutonomous,
  NoQuadraticIntegral,
};

const char* case_name(CaseTag tag);
CaseTag case_from_name(const std::string& name);

// The differential invariants of f and g that steer the case split, all
// built by exact symbolic differentiation, plus the zero-flags evaluated on
// the system's own sample domain.
struct ClassifierState {
  Expr f, g;
  Expr f_y, f_z, f_yy, f_zy, f_zz, f_zyy;
  Expr g_y, g_z, g_yy, g_yz, g_yyy;

  Expr S, P, Q, R, T;
  Expr P_y, P_z, P_zy, P_zz, P_yy;
  Expr Q_y, Q_z, Q_zy, Q_yy;
  Expr R_y, R_z;
  Expr T_y, T_z, T_zz;
  Expr S_y, S_z;
  Expr D;  // 4*P*f_y^2 + 2*f*P_y*f_y - Q*P_y + R*T - 2*P_y^2

  struct Flags {
    bool S_zero = false;
    bool fy_zero = false;
    bool T_zero = false;
    bool Py_zero = false;
    bool D_zero = false;
    bool autonomous = false;
    bool gy_zero = false;
  } flags;
};

struct ConditionResidual {
  std::string id;
  double residual = 0.0;
  bool pass = false;
};

struct ConditionReport {
  CaseTag case_tag = CaseTag::NoQuadraticIntegral;
  CaseTag dispatched_case = CaseTag::NoQuadraticIntegral;
  std::vector<ConditionResidual> residuals;
  bool all_pass = false;
  bool precondition_ok = true;
  std::string note;
  uint64_t seed = 0;
  double tol = kDefaultIdentityTol;

  double max_residual() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.residual);
    return m;
  }
};

ClassifierState compute_invariants(const OdeSystem& sys);

// The published condition set of a case, as (id, expression) pairs that must
// all vanish identically.
std::vector<std::pair<std::string, Expr>> case_conditions(
    const ClassifierState& st, CaseTag tag);

// Evaluates one case's conditions as sampled residuals without
// re-classifying.  A flag pattern that contradicts the case is reported via
// precondition_ok rather than as an error.
ConditionReport check_case_conditions(const OdeSystem& sys,
                                      const ClassifierState& st, CaseTag tag,
                                      double tol = kDefaultIdentityTol);

std::pair<CaseTag, ConditionReport> classify(const OdeSystem& sys,
                                             const ClassifierState& st,
                                             double tol = kDefaultIdentityTol);
std::pair<CaseTag, ConditionReport> classify(const OdeSystem& sys,
                                             double tol = kDefaultIdentityTol);

}  // namespace laxquad
