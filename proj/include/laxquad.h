/* laxquad - quadratic first integrals and sl(2) Lax pairs for
 * y'' + f(z,y) y' + g(z,y) = 0.
 *
 * C interface to the analysis engine: opaque handles, integer status codes,
 * strings owned by the handle that produced them.  Every function is safe to
 * call from multiple threads as long as each handle is used from one thread
 * at a time.
 */
#ifndef LAXQUAD_H
#define LAXQUAD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lx_system lx_system;     /* system spec under construction */
typedef struct lx_analysis lx_analysis; /* finished analysis */

/* Status codes.  The nonzero values double as CLI exit codes. */
typedef enum lx_status {
  LX_OK = 0,
  LX_NO_INTEGRAL = 2,  /* analyzed cleanly; no quadratic first integral */
  LX_ERR_ARG = 22,     /* bad argument / handle misuse */
  LX_ERR_PARSE = 64,   /* expression syntax error */
  LX_ERR_DOMAIN = 65,  /* domain coverage / invalid system */
  LX_ERR_CHECK = 70,   /* internal cross-check failed */
} lx_status;

const char* lx_version(void);

/* Message for the most recent failure on the calling thread. */
const char* lx_last_error(void);

/* --- system construction ------------------------------------------------ */

lx_system* lx_system_new(void);
void lx_system_free(lx_system* sys);

lx_status lx_system_set_f(lx_system* sys, const char* expr);
lx_status lx_system_set_g(lx_system* sys, const char* expr);
lx_status lx_system_set_param(lx_system* sys, const char* name, double value);
lx_status lx_system_set_domain(lx_system* sys, double z_min, double z_max,
                               double y_min, double y_max);
lx_status lx_system_set_guard(lx_system* sys, double guard);
lx_status lx_system_set_seed(lx_system* sys, uint64_t seed);
lx_status lx_system_set_anchor(lx_system* sys, double z0, double y0,
                               double b0);
lx_status lx_system_set_ic(lx_system* sys, double z0, double y0, double yp0);
lx_status lx_system_set_span(lx_system* sys, double span);
lx_status lx_system_set_tolerances(lx_system* sys, double rtol, double atol);
lx_status lx_system_set_max_state(lx_system* sys, double bound);

/* --- analysis ------------------------------------------------------------ */

/* Runs the full pipeline.  Returns LX_OK or LX_NO_INTEGRAL with *out set;
 * any other status leaves *out untouched (details via lx_last_error). */
lx_status lx_analyze(const lx_system* sys, lx_analysis** out);
void lx_analysis_free(lx_analysis* a);

/* LX_OK or LX_NO_INTEGRAL. */
lx_status lx_analysis_status(const lx_analysis* a);
const char* lx_analysis_case(const lx_analysis* a);

/* Serialized views; pointers remain valid until the analysis is freed. */
const char* lx_analysis_json(lx_analysis* a);
const char* lx_analysis_latex(lx_analysis* a);
const char* lx_analysis_csv(lx_analysis* a);

/* --- Lienard family constructors ----------------------------------------- */

/* g = (kappa * \int_0^y f(s) ds + mu)^(-1); f must depend on y only and
 * kappa/mu may be expressions in the parameters.  The resulting expression
 * text is written to buf (NUL terminated); LX_ERR_ARG if it does not fit. */
lx_status lx_construct_g_from_f(const char* f_expr, const char* kappa,
                                const char* mu, char* buf, size_t buflen);

/* f = -nu * g^(-2) * g_y for a y-only g. */
lx_status lx_construct_f_from_g(const char* g_expr, const char* nu, char* buf,
                                size_t buflen);

/* --- built-in corpus ------------------------------------------------------ */

int lx_corpus_count(void);
const char* lx_corpus_name(int index);

/* Runs every corpus fixture at the given seed and hands back the combined
 * JSON report array (caller frees with lx_string_free).  Returns LX_OK when
 * every fixture verifies. */
lx_status lx_corpus_run(uint64_t seed, char** json_out);
void lx_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LAXQUAD_H */
