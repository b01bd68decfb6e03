#include "analyze.hpp"

#include <cmath>
#include <sstream>

namespace laxquad {

namespace {

using nlohmann::json;

json domain_json(const SampleDomain& d) {
  return json{{"z_min", d.z_min}, {"z_max", d.z_max}, {"y_min", d.y_min},
              {"y_max", d.y_max}, {"guard", d.guard}, {"count", d.count},
              {"seed", d.seed}};
}

json expr_string(const Expr& e) {
  // Machine-built graphs can unfold to unreasonable text; keep reports sane.
  if (auto s = e.print_bounded(262144)) return *s;
  return json{{"truncated", e.print_preview(512)}};
}

json field_json(const Field& f, const char* wz_name, const char* wy_name,
                const Anchor& anchor) {
  if (f.is_closed()) return json{{"closed_form", expr_string(f.expr())}};
  json q{{"anchor", {anchor.z0, anchor.y0, anchor.value}},
         {"tolerance", 1e-10}};
  if (f.has_partial_exprs()) {
    q[wz_name] = expr_string(f.dz_expr());
    q[wy_name] = expr_string(f.dy_expr());
  } else {
    q[wz_name] = nullptr;
    q[wy_name] = nullptr;
  }
  return json{{"quadrature", q}};
}

InitialCondition default_ic(const SampleDomain& d) {
  return {d.z_min, 0.5 * (d.y_min + d.y_max), 0.0};
}

}  // namespace

AnalysisResult analyze(const SystemSpec& spec, const Tolerances& tol) {
  AnalysisResult r;
  r.spec = spec;

  Expr f = parse(spec.f_text);
  Expr g = parse(spec.g_text);
  r.sys = OdeSystem(f, g, spec.params, spec.domain);
  r.sys.validate();

  ClassifierState st = compute_invariants(r.sys);
  auto [tag, rep] = classify(r.sys, st, tol.condition);
  r.case_tag = tag;
  r.conditions = rep;
  r.verdicts.conditions = rep.all_pass;

  Anchor anchor = spec.anchor.value_or(
      Anchor{spec.domain.z_min, spec.domain.y_min, 0.0});
  InitialCondition ic = spec.ic.value_or(default_ic(spec.domain));

  if (tag != CaseTag::NoQuadraticIntegral) {
    r.fi = build_first_integral(r.sys, st, tag, anchor);
    r.it5 = it5_residuals(r.sys, *r.fi);
    r.verdicts.it5 = r.it5.pass(tol.it5);
    r.oracle_residual = substitution_oracle_residual(r.sys, *r.fi);
    r.verdicts.oracle = r.oracle_residual <= tol.oracle;

    r.lax = build_lax(*r.fi, r.sys, tol.lax);

    IntegrateOptions opt;
    opt.rtol = spec.rtol;
    opt.atol = spec.atol;
    opt.max_state = spec.max_state;
    r.traj = integrate(r.sys, ic, spec.span, opt);

    r.lax_report = lax_residual(*r.lax, r.sys, r.traj);
    r.verdicts.lax = r.lax_report.max_residual <= tol.lax;

    r.drift = conservation_drift(*r.fi, r.traj);
    r.verdicts.drift = r.drift <= tol.drift;

    // Isospectrality: the positive eigenvalue along the trajectory.
    {
      Complex l0 = eigenvalues(*r.lax, r.traj.ic.z, r.traj.ic.y,
                               r.traj.ic.yp).first;
      double worst = 0.0;
      for (const auto& s : r.traj.samples) {
        try {
          Complex l = eigenvalues(*r.lax, s.z, s.y, s.yp).first;
          worst = std::max(worst, std::abs(l - l0) / (1.0 + std::abs(l0)));
        } catch (const EvalError&) {
        } catch (const QuadratureError&) {
        }
      }
      r.isospectral_drift = worst;
      r.verdicts.isospectral = worst <= tol.isospectral;
    }

    // Trace invariants at the domain sample points.
    {
      auto pts = admissible_points(r.sys.f * r.sys.g, r.sys.domain,
                                   r.sys.params);
      SampleRng rng(spec.domain.seed ^ 0x5eedULL);
      double odd_max = 0.0, even_rel = 0.0;
      int used = 0;
      for (const auto& p : pts) {
        if (used >= 50) break;
        double yp = rng.uniform(-2.0, 2.0);
        try {
          for (int k : {1, 3, 5, 7}) {
            double fact = 1.0;
            for (int i = 2; i <= k; ++i) fact *= i;
            odd_max = std::max(
                odd_max,
                std::abs(trace_invariant(*r.lax, k, p.z, p.y, yp)) * fact);
          }
          Complex tr2 = trace_invariant(*r.lax, 2, p.z, p.y, yp);  // tr/2!
          double ival = r.fi->evaluate(p.z, p.y, yp);
          even_rel = std::max(even_rel, std::abs(tr2 - Complex(ival)) /
                                            (1.0 + std::fabs(ival)));
          ++used;
        } catch (const EvalError&) {
        } catch (const QuadratureError&) {
        }
      }
      r.trace_odd_max = odd_max;
      r.trace_even_rel = even_rel;
      r.verdicts.traces =
          odd_max <= tol.trace_odd && even_rel <= tol.trace_even;
    }

    if (r.verdicts.all()) {
      r.exit_code = kExitPass;
    } else {
      // Conditions passed but verification failed: internal inconsistency.
      throw CrossCheckError(
          "classified system failed verification (it5 " +
          std::to_string(r.it5.max()) + ", lax " +
          std::to_string(r.lax_report.max_residual) + ", drift " +
          std::to_string(r.drift) + ")");
    }
  } else {
    r.exit_code = kExitNoIntegral;
  }

  // --- report ---
  json rj;
  rj["schema_version"] = kSchemaVersion;
  rj["tool"] = json{{"name", kToolName}, {"version", kToolVersion}};
  rj["seed"] = spec.domain.seed;
  if (!spec.name.empty()) rj["name"] = spec.name;
  rj["system"] = json{{"f", f.print()},
                      {"g", g.print()},
                      {"params", spec.params},
                      {"domain", domain_json(spec.domain)},
                      {"ic", {ic.z, ic.y, ic.yp}},
                      {"span", spec.span},
                      {"rtol", spec.rtol},
                      {"atol", spec.atol},
                      {"anchor", {anchor.z0, anchor.y0, anchor.value}}};
  json conds = json::array();
  for (const auto& c : r.conditions.residuals)
    conds.push_back(
        json{{"id", c.id}, {"residual", c.residual}, {"pass", c.pass}});
  rj["classification"] =
      json{{"case", case_name(r.case_tag)},
           {"dispatched_case", case_name(r.conditions.dispatched_case)},
           {"conditions", conds},
           {"tolerance", tol.condition},
           {"note", r.conditions.note}};
  if (r.fi) {
    rj["first_integral"] =
        json{{"A", field_json(r.fi->A, "A_z", "A_y", Anchor{anchor.z0,
                                                            anchor.y0, 0.0})},
             {"B", field_json(r.fi->B, "B_z", "B_y", anchor)},
             {"it5", json{{"ay_minus_f", r.it5.ay_minus_f},
                          {"az_by_g", r.it5.az_by_g},
                          {"bz_a_by", r.it5.bz_a_by},
                          {"points", r.it5.points}}},
             {"oracle_residual", r.oracle_residual}};
    json lx;
    lx["degenerate"] = r.lax->degenerate;
    if (r.lax->closed_U) {
      lx["U"] = r.lax->U_expr.print();
      lx["M_offdiag"] = r.lax->M_expr.print();
    } else if (!r.lax->degenerate) {
      lx["U"] = "sqrt(B)";
      lx["M_offdiag"] = "B_y/(4*sqrt(B))";
    }
    lx["residual"] = r.lax_report.max_residual;
    lx["complex_domain"] = r.lax_report.complex_domain;
    lx["trace_odd_max_abs"] = r.trace_odd_max;
    lx["trace_even_max_rel"] = r.trace_even_rel;
    lx["isospectral_drift"] = r.isospectral_drift;
    rj["lax"] = lx;
    rj["trajectory"] = json{{"samples", r.traj.samples.size()},
                            {"steps_accepted", r.traj.steps_accepted},
                            {"steps_rejected", r.traj.steps_rejected},
                            {"complete", r.traj.complete},
                            {"halted_singular", r.traj.halted_singular},
                            {"halt_reason", r.traj.halt_reason},
                            {"z_end", r.traj.z_end},
                            {"conservation_drift", r.drift}};
  }
  rj["verdicts"] = json{{"conditions", r.verdicts.conditions},
                        {"it5", r.verdicts.it5},
                        {"lax", r.verdicts.lax},
                        {"drift", r.verdicts.drift},
                        {"isospectral", r.verdicts.isospectral},
                        {"traces", r.verdicts.traces},
                        {"oracle", r.verdicts.oracle}};
  rj["exit_code"] = r.exit_code;
  r.report = rj;
  return r;
}

JointVerdicts joint_verdicts(const OdeSystem& sys, CaseTag tag,
                             const Anchor& anchor, const InitialCondition& ic,
                             double span, const IntegrateOptions& opt,
                             const Tolerances& tol) {
  JointVerdicts jv;
  ClassifierState st = compute_invariants(sys);
  ConditionReport rep = check_case_conditions(sys, st, tag, tol.condition);
  jv.condition_residual = rep.max_residual();
  jv.conditions_pass = rep.all_pass;
  // The remaining three verdicts are measured independently; a metric whose
  // evaluation is impossible on the candidate pair counts as a failure with
  // sentinel magnitude.
  constexpr double kUnmeasurable = 1e9;
  FirstIntegral fi;
  try {
    fi = build_first_integral(sys, st, tag, anchor, /*strict=*/false);
    jv.constructed = true;
  } catch (const std::exception&) {
    jv.constructed = false;
    jv.it5_residual = kUnmeasurable;
    jv.lax_residual = kUnmeasurable;
    jv.drift = kUnmeasurable;
    return jv;
  }
  try {
    It5Residuals it5 = it5_residuals(sys, fi);
    jv.it5_residual = std::max(it5.max(), it5.exactness);
    jv.it5_pass = it5.pass(tol.it5);
  } catch (const std::exception&) {
    jv.it5_residual = kUnmeasurable;
  }
  try {
    LaxPair lp = build_lax(fi, sys, tol.lax, /*strict=*/false);
    IntegrateOptions jopt = opt;
    jopt.max_steps = std::min(jopt.max_steps, 200000L);
    Trajectory traj = thin_trajectory(integrate(sys, ic, span, jopt), 60);
    try {
      LaxResidualReport lrep = lax_residual(lp, sys, traj);
      LaxResidualReport lfd = lax_residual_fd(lp, sys, traj);
      bool measured = !lrep.per_sample.empty() && !lfd.per_sample.empty();
      jv.lax_residual = measured
                            ? std::max(lrep.max_residual, lfd.max_residual)
                            : kUnmeasurable;
      jv.lax_pass = measured && lrep.max_residual <= tol.lax &&
                    lfd.max_residual <= 10 * 1e-6;
    } catch (const std::exception&) {
      jv.lax_residual = kUnmeasurable;
    }
    try {
      jv.drift = conservation_drift(fi, traj);
      jv.drift_pass = jv.drift <= tol.drift;
    } catch (const std::exception&) {
      jv.drift = kUnmeasurable;
    }
  } catch (const std::exception&) {
    jv.lax_residual = kUnmeasurable;
    jv.drift = kUnmeasurable;
  }
  return jv;
}

std::string report_to_json_text(const nlohmann::json& report) {
  return report.dump(2) + "\n";
}

std::string analysis_to_latex(const AnalysisResult& r) {
  std::ostringstream out;
  out << "% " << kToolName << " " << kToolVersion << " report\n";
  out << "\\section*{Analysis: $y_{zz} + f\\,y_z + g = 0$}\n";
  out << "\\[ f = " << parse(r.spec.f_text).to_latex()
      << ", \\quad g = " << parse(r.spec.g_text).to_latex() << " \\]\n";
  out << "Case: \\texttt{" << case_name(r.case_tag) << "}\\\\\n";
  if (!r.fi) {
    out << "No quadratic first integral; worst condition residual $"
        << r.conditions.max_residual() << "$.\n";
    return out.str();
  }
  std::string a_tex = r.fi->A.is_closed() ? r.fi->A.expr().to_latex()
                                          : std::string("A(z,y)");
  std::string b_tex = r.fi->B.is_closed() ? r.fi->B.expr().to_latex()
                                          : std::string("B(z,y)");
  std::string u_tex = r.lax->closed_U ? r.lax->U_expr.to_latex()
                                      : std::string("U(z,y)");
  std::string m_tex = r.lax->closed_U ? r.lax->M_expr.to_latex()
                                      : std::string("M_{12}(z,y)");
  out << "\\[ I = \\left(y_z + " << a_tex << "\\right)^2 + " << b_tex
      << " \\]\n";
  out << "\\[ L = \\begin{pmatrix} y_z + " << a_tex << " & " << u_tex
      << " \\\\ " << u_tex << " & -\\left(y_z + " << a_tex
      << "\\right) \\end{pmatrix}, \\quad M = \\begin{pmatrix} 0 & " << m_tex
      << " \\\\ -\\left(" << m_tex << "\\right) & 0 \\end{pmatrix} \\]\n";
  out << "Verification: Lax residual $" << r.lax_report.max_residual
      << "$, conservation drift $" << r.drift << "$, isospectral drift $"
      << r.isospectral_drift << "$.\n";
  return out.str();
}

std::string trajectory_to_csv(const AnalysisResult& r) {
  std::ostringstream out;
  out << "z,y,yp,I\n";
  out.precision(17);
  for (const auto& s : r.traj.samples) {
    out << s.z << "," << s.y << "," << s.yp << ",";
    if (r.fi) {
      try {
        out << r.fi->evaluate(s.z, s.y, s.yp);
      } catch (const std::exception&) {
        out << "nan";
      }
    } else {
      out << "nan";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace laxquad
