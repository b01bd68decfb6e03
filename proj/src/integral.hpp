#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "classify.hpp"
#include "quadrature.hpp"

namespace laxquad {

// The case formula for B_y and 2(g - A_z) disagreed beyond tolerance, or a
// field failed its exactness probe; usually means a misclassified system or
// a transcription error upstream.
struct CrossCheckError : std::runtime_error {
  explicit CrossCheckError(const std::string& what)
      : std::runtime_error(what) {}
};

struct Anchor {
  double z0 = 0.0;
  double y0 = 0.0;
  double value = 0.0;
};

// Scalar field over (z, y): either a closed-form expression or a
// quadrature-backed reconstruction from its partial derivatives.  Both kinds
// expose value + partials as plain functions so downstream code (Lax
// machinery, residual suites) never cares which it got.
class Field {
 public:
  using Fn = std::function<double(double, double)>;

  static Field closed(Expr e, std::shared_ptr<const ParamBinding> params);
  static Field backed(std::shared_ptr<QuadratureField> quad, Fn dz, Fn dy,
                      Expr dz_expr, Expr dy_expr, bool partial_exprs);
  static Field backed_coupled(std::shared_ptr<QuadratureField> quad, Fn dz,
                              Fn dy);

  bool is_closed() const { return closed_; }
  bool has_partial_exprs() const { return has_partial_exprs_; }
  const Expr& expr() const { return expr_; }
  const Expr& dz_expr() const { return dz_expr_; }
  const Expr& dy_expr() const { return dy_expr_; }
  const std::shared_ptr<QuadratureField>& quad() const { return quad_; }

  double value(double z, double y) const;
  double dz(double z, double y) const { return dz_fn_(z, y); }
  double dy(double z, double y) const { return dy_fn_(z, y); }

 private:
  bool closed_ = false;
  bool has_partial_exprs_ = false;
  Expr expr_, dz_expr_, dy_expr_;
  std::shared_ptr<const ParamBinding> params_;
  std::shared_ptr<QuadratureField> quad_;
  Fn dz_fn_, dy_fn_;
};

struct BPartials {
  bool exprs_available = false;
  Expr B_y, B_z;  // meaningful when exprs_available
  Field::Fn by_fn, bz_fn;
};

struct FirstIntegral {
  CaseTag case_tag = CaseTag::NoQuadraticIntegral;
  Field A;
  Field B;
  Anchor anchor;

  double evaluate(double z, double y, double yp) const {
    double a = A.value(z, y);
    return (yp + a) * (yp + a) + B.value(z, y);
  }
};

// Closed-form A for the cases that have one; throws std::invalid_argument
// for SZeroTZero / DZero (those are field-backed, see compute_A).
Expr compute_A_closed(const OdeSystem& sys, const ClassifierState& st,
                      CaseTag tag);

// A in field form for any constructible case.  The anchor fixes the additive
// constant for the two partial-defined cases and is ignored otherwise.
Field compute_A(const OdeSystem& sys, const ClassifierState& st, CaseTag tag,
                const Anchor& a_anchor);

// Case formula for (B_y, B_z), cross-checked against B_y = 2(g - A_z); the
// cross-check failing raises CrossCheckError.  strict=false records the
// mismatch but keeps going (negative-control measurements).
BPartials compute_B_partials(const OdeSystem& sys, const ClassifierState& st,
                             CaseTag tag, const Field& A, double tol = 1e-6,
                             bool strict = true);

// Exactness-checked reconstruction of B from its partials: term-wise
// antidifferentiation when both partials are polynomial in y (with rational
// z-coefficients), adaptive quadrature otherwise.
Field reconstruct_B(const OdeSystem& sys, const BPartials& parts,
                    const Anchor& anchor, const Field& A, bool strict = true);

// Full construction pipeline for a classified system.
FirstIntegral build_first_integral(const OdeSystem& sys,
                                   const ClassifierState& st, CaseTag tag,
                                   const Anchor& anchor, bool strict = true);

// d/dy antiderivative of a rational expression whose denominator does not
// involve v; nullopt when the term-wise rule does not apply.
std::optional<Expr> antidifferentiate(const Expr& e, Var v);

// g = (kappa * \int_0^y f + mu)^{-1} for a y-only f.  kappa and mu may be
// expressions in the parameters.
Expr lienard_g_from_f(const Expr& f, const Expr& kappa, const Expr& mu,
                      const ParamBinding& params);

// f = -nu * g^{-2} * g_y for a y-only g.
Expr lienard_f_from_g(const Expr& g, const Expr& nu,
                      const ParamBinding& params);

// Corollary test on relaxed inputs: an autonomous first integral exists iff
// (g_z = 0 and f = 0) or (f_z = 0 and g = 0).
bool autonomous_integral_test(const OdeSystem& sys);

// Sampled residuals of the three defining relations of a first integral,
// plus the mixed-partial exactness of (B_y, B_z) (the condition for B to be
// a well-defined potential; measured by finite differences when the
// partials have no symbolic form).
struct It5Residuals {
  double ay_minus_f = 0.0;
  double az_by_g = 0.0;   // |A_z + B_y/2 - g|
  double bz_a_by = 0.0;   // |B_z - A*B_y|
  double exactness = 0.0; // |d(B_z)/dy - d(B_y)/dz|
  int points = 0;
  int skipped = 0;

  double max() const {
    return std::max(ay_minus_f, std::max(az_by_g, bz_a_by));
  }
  // The three relations at tol; exactness at the looser FD-limited bound.
  bool pass(double tol = 1e-8, double exact_tol = 1e-6) const {
    return max() <= tol && exactness <= exact_tol;
  }
};
It5Residuals it5_residuals(const OdeSystem& sys, const FirstIntegral& fi);

// Independent substitution oracle: the total-derivative polynomial in y'
// evaluated at yp in {-1, 0.3, 2}; max relative residual over sample points.
double substitution_oracle_residual(const OdeSystem& sys,
                                    const FirstIntegral& fi);

}  // namespace laxquad
