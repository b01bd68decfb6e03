// Command-line front end for the laxquad shared library.  Talks to the
// engine exclusively through the public C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "laxquad.h"

namespace {

struct AnalyzeFlags {
  std::string f, g;
  std::vector<std::string> params;
  std::vector<double> ic;       // z,y,yp
  double span = 5.0;
  bool span_set = false;
  double rtol = 1e-10, atol = 1e-12;
  std::vector<double> domain;   // zmin,zmax,ymin,ymax
  std::vector<double> anchor;   // z0,y0,B0
  double guard = 0.0;
  double max_state = 0.0;
  uint64_t seed = 0;
  bool seed_set = false;
};

uint64_t default_seed() {
  if (const char* env = std::getenv("LLX_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    std::fprintf(stderr, "warning: ignoring malformed LLX_SEED '%s'\n", env);
  }
  return 7;
}

void add_analyze_options(CLI::App* cmd, AnalyzeFlags& fl) {
  cmd->add_option("--f", fl.f, "friction coefficient f(z,y)")->required();
  cmd->add_option("--g", fl.g, "restoring coefficient g(z,y)")->required();
  cmd->add_option("--param", fl.params, "parameter binding name=value");
  cmd->add_option("--ic", fl.ic, "initial condition z,y,yp")->expected(3)
      ->delimiter(',');
  cmd->add_option("--span", fl.span, "integration span");
  cmd->add_option("--rtol", fl.rtol, "relative tolerance");
  cmd->add_option("--atol", fl.atol, "absolute tolerance");
  cmd->add_option("--seed", fl.seed, "sampler seed");
  cmd->add_option("--domain", fl.domain, "sample domain zmin,zmax,ymin,ymax")
      ->expected(4)->delimiter(',');
  cmd->add_option("--anchor", fl.anchor, "gauge anchor z0,y0,B0")->expected(3)
      ->delimiter(',');
  cmd->add_option("--guard", fl.guard, "admissibility guard");
  cmd->add_option("--max-state", fl.max_state,
                  "halt integration beyond this |y| or |y'|");
}

int fail(lx_status st, const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, lx_last_error());
  return static_cast<int>(st);
}

// Builds the system handle from the parsed flags; nullptr on error with the
// status stored in *st.
lx_system* build_system(const AnalyzeFlags& fl, const CLI::App* cmd,
                        lx_status* st) {
  lx_system* sys = lx_system_new();
  auto check = [&](lx_status s) {
    if (s != LX_OK && *st == LX_OK) *st = s;
    return s == LX_OK;
  };
  *st = LX_OK;
  if (!check(lx_system_set_f(sys, fl.f.c_str())) ||
      !check(lx_system_set_g(sys, fl.g.c_str()))) {
    lx_system_free(sys);
    return nullptr;
  }
  for (const auto& p : fl.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: malformed --param '%s' (want name=value)\n",
                   p.c_str());
      *st = LX_ERR_ARG;
      lx_system_free(sys);
      return nullptr;
    }
    std::string name = p.substr(0, eq);
    double value = std::strtod(p.c_str() + eq + 1, nullptr);
    if (!check(lx_system_set_param(sys, name.c_str(), value))) {
      lx_system_free(sys);
      return nullptr;
    }
  }
  bool ok = true;
  if (fl.domain.size() == 4)
    ok = ok && check(lx_system_set_domain(sys, fl.domain[0], fl.domain[1],
                                          fl.domain[2], fl.domain[3]));
  if (fl.anchor.size() == 3)
    ok = ok && check(lx_system_set_anchor(sys, fl.anchor[0], fl.anchor[1],
                                          fl.anchor[2]));
  if (fl.ic.size() == 3)
    ok = ok && check(lx_system_set_ic(sys, fl.ic[0], fl.ic[1], fl.ic[2]));
  if (cmd->count("--span")) ok = ok && check(lx_system_set_span(sys, fl.span));
  if (fl.guard > 0.0) ok = ok && check(lx_system_set_guard(sys, fl.guard));
  if (fl.max_state > 0.0)
    ok = ok && check(lx_system_set_max_state(sys, fl.max_state));
  ok = ok && check(lx_system_set_tolerances(sys, fl.rtol, fl.atol));
  uint64_t seed = cmd->count("--seed") ? fl.seed : default_seed();
  ok = ok && check(lx_system_set_seed(sys, seed));
  if (!ok) {
    lx_system_free(sys);
    return nullptr;
  }
  return sys;
}

int run_analysis(const AnalyzeFlags& fl, const CLI::App* cmd,
                 const std::string& format) {
  lx_status st = LX_OK;
  lx_system* sys = build_system(fl, cmd, &st);
  if (!sys) return fail(st, "invalid system spec");
  lx_analysis* a = nullptr;
  st = lx_analyze(sys, &a);
  lx_system_free(sys);
  if (st != LX_OK) return fail(st, "analysis failed");
  if (format == "json") {
    std::fputs(lx_analysis_json(a), stdout);
  } else if (format == "latex") {
    std::fputs(lx_analysis_latex(a), stdout);
  } else if (format == "csv") {
    std::fputs(lx_analysis_csv(a), stdout);
  }
  int code = static_cast<int>(lx_analysis_status(a));
  if (code == LX_NO_INTEGRAL)
    std::fprintf(stderr, "verdict: no quadratic first integral (case %s)\n",
                 lx_analysis_case(a));
  lx_analysis_free(a);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic first integrals and sl(2) Lax pairs for "
               "y'' + f(z,y) y' + g(z,y) = 0"};
  app.require_subcommand(1);

  AnalyzeFlags afl;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "classify a system, build I and (L, M), verify numerically");
  add_analyze_options(analyze, afl);

  AnalyzeFlags efl;
  std::string format = "json";
  CLI::App* emit = app.add_subcommand(
      "emit", "analyze and emit a report in the chosen format");
  add_analyze_options(emit, efl);
  emit->add_option("--format", format, "json|latex|csv")
      ->check(CLI::IsMember({"json", "latex", "csv"}));

  CLI::App* corpus_cmd = app.add_subcommand(
      "corpus", "run the six built-in verification fixtures");
  uint64_t corpus_seed = 0;
  bool corpus_seed_set = false;
  corpus_cmd->add_option("--seed", corpus_seed, "sampler seed")
      ->each([&](const std::string&) { corpus_seed_set = true; });

  CLI::App* construct = app.add_subcommand(
      "construct", "build a Lienard-family system spec from f or from g");
  std::string mode, expr, kappa = "1", mu = "0", nu = "1";
  construct->add_option("--mode", mode, "g-from-f | f-from-g")
      ->required()
      ->check(CLI::IsMember({"g-from-f", "f-from-g"}));
  construct->add_option("--expr", expr, "the given coefficient (y only)")
      ->required();
  construct->add_option("--kappa", kappa, "kappa (g-from-f)");
  construct->add_option("--mu", mu, "mu (g-from-f)");
  construct->add_option("--nu", nu, "nu (f-from-g)");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) return run_analysis(afl, analyze, "json");
  if (emit->parsed()) return run_analysis(efl, emit, format);

  if (corpus_cmd->parsed()) {
    char* json = nullptr;
    uint64_t seed = corpus_seed_set ? corpus_seed : default_seed();
    lx_status st = lx_corpus_run(seed, &json);
    if (st != LX_OK) return fail(st, "corpus run failed");
    std::fputs(json, stdout);
    lx_string_free(json);
    return 0;
  }

  if (construct->parsed()) {
    std::vector<char> buf(1 << 16);
    lx_status st;
    std::string f_out, g_out;
    if (mode == "g-from-f") {
      st = lx_construct_g_from_f(expr.c_str(), kappa.c_str(), mu.c_str(),
                                 buf.data(), buf.size());
      if (st != LX_OK) return fail(st, "construction failed");
      f_out = expr;
      g_out = buf.data();
    } else {
      st = lx_construct_f_from_g(expr.c_str(), nu.c_str(), buf.data(),
                                 buf.size());
      if (st != LX_OK) return fail(st, "construction failed");
      f_out = buf.data();
      g_out = expr;
    }
    // A ready-to-analyze spec.
    std::printf("{\n  \"f\": \"%s\",\n  \"g\": \"%s\"\n}\n", f_out.c_str(),
                g_out.c_str());
    return 0;
  }
  return 0;
}
