#include "laxquad.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "analyze.hpp"
#include "corpus.hpp"

using namespace laxquad;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

lx_status status_for(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const ParseError*>(&e)) return LX_ERR_PARSE;
  if (dynamic_cast<const DomainCoverageError*>(&e)) return LX_ERR_DOMAIN;
  if (dynamic_cast<const InvalidSystem*>(&e)) return LX_ERR_DOMAIN;
  if (dynamic_cast<const CrossCheckError*>(&e)) return LX_ERR_CHECK;
  if (dynamic_cast<const BuildLaxError*>(&e)) return LX_ERR_CHECK;
  if (dynamic_cast<const QuadratureError*>(&e)) return LX_ERR_CHECK;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return LX_ERR_ARG;
  return LX_ERR_CHECK;
}

lx_status copy_out(const std::string& text, char* buf, size_t buflen) {
  if (!buf || buflen == 0 || text.size() + 1 > buflen) {
    set_error("output buffer too small (" + std::to_string(text.size() + 1) +
              " bytes needed)");
    return LX_ERR_ARG;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return LX_OK;
}

}  // namespace

struct lx_system {
  SystemSpec spec;
};

struct lx_analysis {
  AnalysisResult result;
  std::string json_cache, latex_cache, csv_cache;
};

extern "C" {

const char* lx_version(void) { return kToolVersion; }

const char* lx_last_error(void) { return g_last_error.c_str(); }

lx_system* lx_system_new(void) { return new (std::nothrow) lx_system(); }

void lx_system_free(lx_system* sys) { delete sys; }

#define LX_REQUIRE(cond, msg)    \
  do {                           \
    if (!(cond)) {               \
      set_error(msg);            \
      return LX_ERR_ARG;         \
    }                            \
  } while (0)

lx_status lx_system_set_f(lx_system* sys, const char* expr) {
  LX_REQUIRE(sys && expr, "null argument");
  try {
    (void)parse(expr);  // validate now so errors carry positions
    sys->spec.f_text = expr;
    return LX_OK;
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

lx_status lx_system_set_g(lx_system* sys, const char* expr) {
  LX_REQUIRE(sys && expr, "null argument");
  try {
    (void)parse(expr);
    sys->spec.g_text = expr;
    return LX_OK;
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

lx_status lx_system_set_param(lx_system* sys, const char* name, double value) {
  LX_REQUIRE(sys && name && *name, "null or empty parameter name");
  sys->spec.params[name] = value;
  return LX_OK;
}

lx_status lx_system_set_domain(lx_system* sys, double z_min, double z_max,
                               double y_min, double y_max) {
  LX_REQUIRE(sys, "null handle");
  LX_REQUIRE(z_min < z_max && y_min < y_max, "degenerate domain");
  sys->spec.domain.z_min = z_min;
  sys->spec.domain.z_max = z_max;
  sys->spec.domain.y_min = y_min;
  sys->spec.domain.y_max = y_max;
  return LX_OK;
}

lx_status lx_system_set_guard(lx_system* sys, double guard) {
  LX_REQUIRE(sys, "null handle");
  LX_REQUIRE(guard > 0.0, "guard must be positive");
  sys->spec.domain.guard = guard;
  return LX_OK;
}

lx_status lx_system_set_seed(lx_system* sys, uint64_t seed) {
  LX_REQUIRE(sys, "null handle");
  sys->spec.domain.seed = seed;
  return LX_OK;
}

lx_status lx_system_set_anchor(lx_system* sys, double z0, double y0,
                               double b0) {
  LX_REQUIRE(sys, "null handle");
  sys->spec.anchor = Anchor{z0, y0, b0};
  return LX_OK;
}

lx_status lx_system_set_ic(lx_system* sys, double z0, double y0, double yp0) {
  LX_REQUIRE(sys, "null handle");
  sys->spec.ic = InitialCondition{z0, y0, yp0};
  return LX_OK;
}

lx_status lx_system_set_span(lx_system* sys, double span) {
  LX_REQUIRE(sys, "null handle");
  sys->spec.span = span;
  return LX_OK;
}

lx_status lx_system_set_tolerances(lx_system* sys, double rtol, double atol) {
  LX_REQUIRE(sys, "null handle");
  LX_REQUIRE(rtol > 0.0 && atol > 0.0, "tolerances must be positive");
  sys->spec.rtol = rtol;
  sys->spec.atol = atol;
  return LX_OK;
}

lx_status lx_system_set_max_state(lx_system* sys, double bound) {
  LX_REQUIRE(sys, "null handle");
  LX_REQUIRE(bound > 0.0, "bound must be positive");
  sys->spec.max_state = bound;
  return LX_OK;
}

lx_status lx_analyze(const lx_system* sys, lx_analysis** out) {
  LX_REQUIRE(sys && out, "null argument");
  LX_REQUIRE(!sys->spec.f_text.empty() && !sys->spec.g_text.empty(),
             "f and g must be set before analysis");
  try {
    auto* a = new lx_analysis();
    a->result = analyze(sys->spec);
    *out = a;
    return LX_OK;
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

void lx_analysis_free(lx_analysis* a) { delete a; }

lx_status lx_analysis_status(const lx_analysis* a) {
  if (!a) return LX_ERR_ARG;
  return a->result.exit_code == kExitNoIntegral ? LX_NO_INTEGRAL : LX_OK;
}

const char* lx_analysis_case(const lx_analysis* a) {
  if (!a) return "";
  return case_name(a->result.case_tag);
}

const char* lx_analysis_json(lx_analysis* a) {
  if (!a) return "";
  if (a->json_cache.empty())
    a->json_cache = report_to_json_text(a->result.report);
  return a->json_cache.c_str();
}

const char* lx_analysis_latex(lx_analysis* a) {
  if (!a) return "";
  if (a->latex_cache.empty()) a->latex_cache = analysis_to_latex(a->result);
  return a->latex_cache.c_str();
}

const char* lx_analysis_csv(lx_analysis* a) {
  if (!a) return "";
  if (a->csv_cache.empty()) a->csv_cache = trajectory_to_csv(a->result);
  return a->csv_cache.c_str();
}

lx_status lx_construct_g_from_f(const char* f_expr, const char* kappa,
                                const char* mu, char* buf, size_t buflen) {
  LX_REQUIRE(f_expr && kappa && mu, "null argument");
  try {
    Expr g = lienard_g_from_f(parse(f_expr), parse(kappa), parse(mu), {});
    return copy_out(g.print(), buf, buflen);
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

lx_status lx_construct_f_from_g(const char* g_expr, const char* nu, char* buf,
                                size_t buflen) {
  LX_REQUIRE(g_expr && nu, "null argument");
  try {
    Expr f = lienard_f_from_g(parse(g_expr), parse(nu), {});
    return copy_out(f.print(), buf, buflen);
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

int lx_corpus_count(void) { return static_cast<int>(corpus().size()); }

const char* lx_corpus_name(int index) {
  const auto& c = corpus();
  if (index < 0 || index >= static_cast<int>(c.size())) return "";
  return c[static_cast<size_t>(index)].name.c_str();
}

lx_status lx_corpus_run(uint64_t seed, char** json_out) {
  LX_REQUIRE(json_out, "null argument");
  try {
    std::string text = corpus_json(seed);
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) {
      set_error("allocation failed");
      return LX_ERR_ARG;
    }
    std::memcpy(out, text.c_str(), text.size() + 1);
    *json_out = out;
    return LX_OK;
  } catch (const std::exception& e) {
    return status_for(e);
  }
}

void lx_string_free(char* s) { std::free(s); }

}  // extern "C"
