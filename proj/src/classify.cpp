#include "classify.hpp"

#include <algorithm>

namespace laxquad {

const char* case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::Generic: return "Generic";
    case CaseTag::FyZero: return "FyZero";
    case CaseTag::SZero: return "SZero";
    case CaseTag::SZeroTZero: return "SZeroTZero";
    case CaseTag::DZero: return "DZero";
    case CaseTag::PyZero: return "PyZero";
    case CaseTag::LienardAutonomous: return "LienardAutonomous";
    case CaseTag::NoQuadraticIntegral: return "NoQuadraticIntegral";
  }
  return "?";
}

CaseTag case_from_name(const std::string& name) {
  for (CaseTag t :
       {CaseTag::Generic, CaseTag::FyZero, CaseTag::SZero, CaseTag::SZeroTZero,
        CaseTag::DZero, CaseTag::PyZero, CaseTag::LienardAutonomous,
        CaseTag::NoQuadraticIntegral}) {
    if (name == case_name(t)) return t;
  }
  throw std::invalid_argument("unknown case tag '" + name + "'");
}

ClassifierState compute_invariants(const OdeSystem& sys) {
  ClassifierState st;
  const Expr& f = sys.f;
  const Expr& g = sys.g;
  st.f = f;
  st.g = g;

  st.f_y = f.diff(Var::Y);
  st.f_z = f.diff(Var::Z);
  st.f_yy = st.f_y.diff(Var::Y);
  st.f_zy = st.f_z.diff(Var::Y);
  st.f_zz = st.f_z.diff(Var::Z);
  st.f_zyy = st.f_zy.diff(Var::Y);

  st.g_y = g.diff(Var::Y);
  st.g_z = g.diff(Var::Z);
  st.g_yy = st.g_y.diff(Var::Y);
  st.g_yz = st.g_y.diff(Var::Z);
  st.g_yyy = st.g_yy.diff(Var::Y);

  st.S = st.g_yyy * st.f_y + st.f_yy * st.f_zy - st.f_yy * st.g_yy -
         st.f_zyy * st.f_y;
  st.P = st.f_z - st.g_y;
  st.Q = st.g_yy;
  st.R = st.f_yy;
  st.T = st.f_zz - st.g_yz - 2 * f * st.f_z + 2 * f * st.g_y;

  st.P_y = st.P.diff(Var::Y);
  st.P_z = st.P.diff(Var::Z);
  st.P_zy = st.P_z.diff(Var::Y);
  st.P_zz = st.P_z.diff(Var::Z);
  st.P_yy = st.P_y.diff(Var::Y);

  st.Q_y = st.Q.diff(Var::Y);
  st.Q_z = st.Q.diff(Var::Z);
  st.Q_zy = st.Q_z.diff(Var::Y);
  st.Q_yy = st.Q_y.diff(Var::Y);

  st.R_y = st.R.diff(Var::Y);
  st.R_z = st.R.diff(Var::Z);

  st.T_y = st.T.diff(Var::Y);
  st.T_z = st.T.diff(Var::Z);
  st.T_zz = st.T_z.diff(Var::Z);

  st.S_y = st.S.diff(Var::Y);
  st.S_z = st.S.diff(Var::Z);

  const Expr& fy = st.f_y;
  st.D = 4 * st.P * fy * fy + 2 * f * st.P_y * fy - st.Q * st.P_y +
         st.R * st.T - 2 * st.P_y * st.P_y;

  auto zero = [&](const Expr& e) {
    return is_identically_zero(e, sys.domain, sys.params);
  };
  st.flags.S_zero = zero(st.S);
  st.flags.fy_zero = zero(st.f_y);
  st.flags.T_zero = zero(st.T);
  st.flags.Py_zero = zero(st.P_y);
  st.flags.D_zero = zero(st.D);
  st.flags.autonomous = zero(st.f_z) && zero(st.g_z);
  st.flags.gy_zero = zero(st.g_y);
  return st;
}

std::vector<std::pair<std::string, Expr>> case_conditions(
    const ClassifierState& st, CaseTag tag) {
  const Expr& f = st.f;
  const Expr& g = st.g;
  const Expr& fy = st.f_y;
  const Expr& fz = st.f_z;
  const Expr& gy = st.g_y;
  const Expr& gz = st.g_z;
  const Expr& gzy = st.g_yz;
  const Expr& fzz = st.f_zz;
  const Expr& S = st.S;
  const Expr& P = st.P;
  const Expr& Q = st.Q;
  const Expr& R = st.R;
  const Expr& T = st.T;
  const Expr& Py = st.P_y;
  const Expr& Pz = st.P_z;
  const Expr& Pzy = st.P_zy;
  const Expr& Pzz = st.P_zz;
  const Expr& Pyy = st.P_yy;
  const Expr& Qy = st.Q_y;
  const Expr& Qz = st.Q_z;
  const Expr& Qzy = st.Q_zy;
  const Expr& Qyy = st.Q_yy;
  const Expr& Ry = st.R_y;
  const Expr& Rz = st.R_z;
  const Expr& Ty = st.T_y;
  const Expr& Tz = st.T_z;
  const Expr& Tzz = st.T_zz;
  const Expr& Sy = st.S_y;
  const Expr& Sz = st.S_z;

  auto sq = [](const Expr& e) { return e * e; };
  auto cube = [](const Expr& e) { return e * e * e; };
  auto p4 = [&](const Expr& e) { return sq(sq(e)); };
  auto p5 = [&](const Expr& e) { return sq(sq(e)) * e; };

  std::vector<std::pair<std::string, Expr>> out;
  switch (tag) {
    case CaseTag::LienardAutonomous: {
      out.emplace_back("lienard.1",
                       f * g * st.g_yy - gy * (2 * f * gy + fy * g));
      break;
    }
    case CaseTag::FyZero: {
      out.emplace_back("fy0.1", 2 * Q * Qz + 2 * T * Qy - 6 * sq(Q) * f);
      out.emplace_back(
          "fy0.2",
          (f * g - gz) * p5(Q) + 3 * Qy * T * (3 * T * f - Tz) * sq(Q) +
              (4 * T * fz - 12 * T * sq(f) - T * gy + 7 * f * Tz - Tzz) *
                  p4(Q) +
              Qyy * cube(T) * Q - 3 * sq(Qy) * cube(T));
      break;
    }
    case CaseTag::Generic: {
      out.emplace_back(
          "generic.1",
          (f * Py * fy - P * sq(fy) + Q * Py + 2 * sq(Py) - fy * Pzy) *
                  (2 * P * R * f - 3 * P * sq(fy) - 3 * f * Py * fy - R * Pz +
                   fy * Pzy) -
              (2 * P * sq(f) * fy - 2 * sq(P) * fy + 2 * P * Q * f +
               4 * P * f * Py - 2 * P * fy * gy - 3 * f * Pz * fy -
               g * Py * fy - Q * Pz - 2 * Pz * Py + fy * Pzz) *
                  S);
      out.emplace_back(
          "generic.2",
          sq(S) * Py + (4 * f * fy + Q) * sq(S) - S * Sz * fy +
              fy * (2 * P * f - Pz) * Ry * S - R * sq(Py) * S +
              (fy * Rz - 4 * R * f * fy - 6 * cube(fy) - Q * R) * Py * S -
              fy * R * (4 * P * fy - Pzy) * S + 3 * Sy * sq(fy) * f * Py -
              Sy * fy *
                  (2 * P * R * f - 3 * P * sq(fy) - R * Pz + Pzy * fy));
      break;
    }
    case CaseTag::SZero: {
      out.emplace_back("s0.1", R * Py - fy * Pyy);
      out.emplace_back("s0.2", P * sq(fy) + f * Py * fy + R * T - fy * Ty);
      out.emplace_back("s0.3",
                       (Qy * Py - R * f * Py - T * Ry) * fy -
                           6 * cube(fy) * Py - R * sq(fy) * P -
                           R * (Q * Py - R * T));
      out.emplace_back(
          "s0.extra1",
          R * fy * Q * Py * Tz - Qy * fy * Q * T * Py - R * Qz * fy * T * Py -
              sq(fy) * T * (3 * sq(f) + 2 * P + gy) * R * Py +
              R * sq(fy) * f * Py * Tz + 2 * Qy * sq(fy) * f * T * Py -
              4 * R * sq(fy) * Q * T * P - Qy * sq(fy) * Py * Tz -
              sq(R) * fy * f * sq(T) + R * cube(fy) * P * Tz +
              R * sq(Q) * T * Py + R * Q * T * sq(Py) - Qy * fy * T * sq(Py) -
              cube(fy) * T * (5 * P * f + 7 * T) * R + 3 * R * Qy * fy * sq(T) +
              2 * Qy * cube(fy) * T * P - 12 * cube(fy) * Q * T * Py -
              18 * p4(fy) * f * T * Py + sq(fy) * T * Qzy * Py +
              6 * p4(fy) * Py * Tz - 2 * sq(R) * Q * sq(T) -
              6 * cube(fy) * T * sq(Py) - sq(fy) * Qyy * sq(T) -
              18 * p5(fy) * T * P - 3 * R * fy * Q * f * T * Py);
      out.emplace_back(
          "s0.extra2",
          28 * p5(fy) * g * sq(P) -
              2 * sq(Py) * (9 * P * T - 9 * T * sq(f) + 3 * T * gy + gz * Py) *
                  sq(fy) -
              4 * Tzz * p4(fy) * P +
              2 * Py *
                  (2 * sq(f) * g * Py + 18 * P * T * f - 6 * P * g * Py +
                   f * Py * gz - g * Py * gy - 4 * sq(T) - 3 * T * cube(f)) *
                  cube(fy) -
              (15 * P * T * f + 12 * P * g * Py + 4 * sq(T)) * cube(fy) * Q +
              R * sq(fy) * sq(Tz) + (18 * P * f + 4 * T) * p4(fy) * Tz +
              R * sq(Q) * sq(T) + 2 * Tzz * sq(fy) * sq(Py) -
              5 * R * fy * T * Py * Tz + 15 * R * cube(fy) * g * T * P -
              2 * sq(fy) * Q * f * Py * Tz - 2 * R * fy * Q * T * Tz -
              2 * Tzz * cube(fy) * f * Py + 2 * sq(R) * fy * g * sq(T) +
              T * Py * (15 * T * f - g * Py) * fy * R -
              12 * sq(fy) * f * sq(Py) * Tz +
              2 * Py * (4 * sq(f) - P + gy) * cube(fy) * Tz +
              4 * Qz * cube(fy) * T * P + 5 * cube(fy) * Q * P * Tz -
              5 * sq(fy) * sq(Q) * T * P - 2 * Qy * fy * sq(T) * Py +
              2 * R * Q * sq(T) * Py -
              Py * (3 * T * sq(f) + 4 * f * g * Py + 19 * P * T + 3 * T * gy +
                    gz * Py) *
                  sq(fy) * Q -
              T * (T * f + g * Py) * sq(fy) * Qy - Tzz * R * sq(fy) * T +
              Qy * sq(fy) * T * Tz - Qy * fy * Q * sq(T) +
              R * Qz * fy * sq(T) + Py * (3 * T * f + g * Py) * Qz * sq(fy) -
              R * fy * Q * g * T * Py +
              T * (7 * f * g * Py - 2 * T * sq(f) + 23 * P * T + T * gy +
                   gz * Py) *
                  sq(fy) * R +
              (2 * T * f - g * Py) * sq(fy) * R * Tz + Tzz * sq(fy) * Q * Py -
              Qz * sq(fy) * Py * Tz + 3 * sq(R) * cube(T) +
              (20 * P * f * g * Py - 14 * P * T * sq(f) + 44 * sq(P) * T +
               4 * P * T * gy + 4 * P * Py * gz - 4 * sq(T) * f -
               4 * T * g * Py) *
                  p4(fy));
      break;
    }
    case CaseTag::SZeroTZero: {
      out.emplace_back("st0.1", fz - gy);
      break;
    }
    case CaseTag::DZero: {
      out.emplace_back("d0.1", R * T + 4 * sq(fy) * P - 2 * sq(Py) +
                                   (2 * f * fy - Q) * Py);
      out.emplace_back("d0.2", R * Py - fy * Pyy);
      out.emplace_back(
          "d0.3",
          fy * (Q * Py - 4 * P * sq(fy) - 2 * f * Py * fy + 2 * sq(Py)) * Ry -
              R * (2 * R * sq(Py) - 5 * P * R * sq(fy) - 3 * R * f * Py * fy -
                   6 * Py * cube(fy) + Qy * Py * fy));
      out.emplace_back(
          "d0.4",
          g * fy * sq(R) * Py + 2 * R * cube(fy) * f * P +
              (5 * P * Q + 2 * P * Py + 2 * gy * Py) * R * sq(fy) -
              8 * p4(fy) * f * Py + Py * (2 * Q * f - 2 * f * Py - Qz) * R * fy -
              sq(Py) * (Q + 2 * Py) * R - 16 * p5(fy) * P +
              (4 * Q * Py - 4 * P * Qy + 8 * sq(Py)) * cube(fy) -
              2 * Qy * sq(fy) * f * Py + Qy * Py * (Q + 2 * Py) * fy);
      break;
    }
    case CaseTag::PyZero: {
      out.emplace_back("py0.1", st.f_zy - st.g_yy);
      out.emplace_back("py0.2",
                       (2 * f * gy - 2 * f * fz + fzz - gzy) * R +
                           3 * (fz - gy) * sq(fy));
      out.emplace_back(
          "py0.3",
          g * cube(R) + (3 * fy * gy + 3 * f * Q + 3 * Qz) * sq(R) -
              (27 * Q * sq(fy) + 3 * f * fy * Qy + 3 * fy * Qzy +
               6 * Q * Qy) *
                  R +
              6 * fy * Qy * (3 * sq(fy) + Qy));
      out.emplace_back("py0.4", 4 * sq(R) - 3 * fy * Ry);
      out.emplace_back("py0.5", 3 * sq(fy) * Qyy + 4 * Q * sq(R) - 8 * R * fy * Qy);
      break;
    }
    case CaseTag::NoQuadraticIntegral:
      break;
  }
  return out;
}

namespace {

// Flag pattern each case presumes; mismatches make the report say so.
std::string precondition_note(const ClassifierState& st, CaseTag tag) {
  const auto& fl = st.flags;
  switch (tag) {
    case CaseTag::LienardAutonomous:
      if (!fl.autonomous) return "system is not autonomous";
      if (fl.gy_zero) return "g_y vanishes identically";
      return "";
    case CaseTag::FyZero:
      if (!fl.fy_zero) return "f_y does not vanish identically";
      return "";
    case CaseTag::Generic:
      if (fl.S_zero) return "S vanishes identically";
      if (fl.fy_zero) return "f_y vanishes identically";
      return "";
    case CaseTag::SZero:
      if (!fl.S_zero) return "S does not vanish identically";
      if (fl.T_zero) return "T vanishes identically";
      if (fl.D_zero) return "case denominator vanishes identically";
      if (fl.Py_zero) return "P_y vanishes identically";
      if (fl.fy_zero) return "f_y vanishes identically";
      return "";
    case CaseTag::SZeroTZero:
      if (!fl.S_zero || !fl.T_zero) return "S and T do not both vanish";
      return "";
    case CaseTag::DZero:
      if (!fl.S_zero) return "S does not vanish identically";
      if (fl.T_zero) return "T vanishes identically";
      if (!fl.D_zero) return "case denominator does not vanish";
      return "";
    case CaseTag::PyZero:
      if (!fl.S_zero) return "S does not vanish identically";
      if (fl.T_zero) return "T vanishes identically";
      if (fl.D_zero) return "case denominator vanishes identically";
      if (!fl.Py_zero) return "P_y does not vanish identically";
      return "";
    case CaseTag::NoQuadraticIntegral:
      return "";
  }
  return "";
}

}  // namespace

ConditionReport check_case_conditions(const OdeSystem& sys,
                                      const ClassifierState& st, CaseTag tag,
                                      double tol) {
  if (tag == CaseTag::NoQuadraticIntegral)
    throw std::invalid_argument("no condition set for the negative verdict");
  ConditionReport rep;
  rep.case_tag = tag;
  rep.dispatched_case = tag;
  rep.seed = sys.domain.seed;
  rep.tol = tol;
  rep.note = precondition_note(st, tag);
  rep.precondition_ok = rep.note.empty();
  rep.all_pass = true;
  for (auto& [id, expr] : case_conditions(st, tag)) {
    ConditionResidual r;
    r.id = id;
    if (is_identically_zero(expr, sys.domain, sys.params, tol)) {
      // The exact fast path can prove zero without sampling; the recorded
      // residual is still the sampled one so reports carry numbers.
      r.residual = max_relative_residual(expr, sys.domain, sys.params);
      r.pass = true;
    } else {
      r.residual = max_relative_residual(expr, sys.domain, sys.params);
      r.pass = r.residual <= tol;
    }
    rep.all_pass = rep.all_pass && r.pass;
    rep.residuals.push_back(std::move(r));
  }
  return rep;
}

std::pair<CaseTag, ConditionReport> classify(const OdeSystem& sys,
                                             const ClassifierState& st,
                                             double tol) {
  const auto& fl = st.flags;
  CaseTag tag;
  if (fl.autonomous && !fl.gy_zero) {
    tag = CaseTag::LienardAutonomous;
  } else if (fl.fy_zero) {
    tag = CaseTag::FyZero;
  } else if (!fl.S_zero) {
    tag = CaseTag::Generic;
  } else if (fl.T_zero) {
    tag = CaseTag::SZeroTZero;
  } else if (fl.D_zero) {
    tag = CaseTag::DZero;
  } else if (fl.Py_zero) {
    tag = CaseTag::PyZero;
  } else {
    tag = CaseTag::SZero;
  }
  ConditionReport rep = check_case_conditions(sys, st, tag, tol);
  if (!rep.all_pass) {
    rep.case_tag = CaseTag::NoQuadraticIntegral;
    rep.note = std::string("conditions of case ") + case_name(tag) + " fail";
    return {CaseTag::NoQuadraticIntegral, rep};
  }
  return {tag, rep};
}

std::pair<CaseTag, ConditionReport> classify(const OdeSystem& sys, double tol) {
  return classify(sys, compute_invariants(sys), tol);
}

}  // namespace laxquad
