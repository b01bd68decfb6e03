#pragma once

#include <complex>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <memory>
#include <stdexcept>
#include <string>

#include "rational.hpp"

namespace laxquad {

enum class Var { Z, Y };

enum class UnOp { Neg, Exp, Ln, Sqrt };
enum class BinOp { Add, Sub, Mul, Div, Pow };

// Parameter name -> bound value.  std::map keeps report output deterministic.
using ParamBinding = std::map<std::string, double>;

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// A denominator / ln / sqrt argument fell below the admissibility guard.
// Sampling treats this as "reject the point", evaluation proper as an error.
struct GuardViolation : EvalError {
  GuardViolation(const std::string& what, std::string subexpr_)
      : EvalError(what), subexpr(std::move(subexpr_)) {}
  std::string subexpr;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, size_t position_)
      : std::runtime_error(what + " at position " + std::to_string(position_)),
        position(position_) {}
  size_t position;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Param, Variable, Unary, Binary };
  Kind kind;

  // Number
  bool exact = true;
  Rational rat;
  double flt = 0.0;

  std::string name;  // Param
  Var var = Var::Z;  // Variable
  UnOp un = UnOp::Neg;
  BinOp bin = BinOp::Add;
  NodePtr a, b;
};

struct EvalPoint {
  double z = 0.0;
  double y = 0.0;
  const ParamBinding* params = nullptr;
};

// Immutable expression over (z, y, named parameters).  All operations are
// pure; Expr values are cheap to copy and safe to share across threads.
class Expr {
 public:
  Expr() : Expr(integer(0)) {}
  Expr(int v) : Expr(integer(v)) {}  // NOLINT: literals in formulas
  Expr(const Rational& r) : Expr(rational(r)) {}  // NOLINT
  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static Expr integer(long long v);
  static Expr rational(const Rational& r);
  static Expr real(double v);
  static Expr param(const std::string& name);
  static Expr variable(Var v);
  static Expr z() { return variable(Var::Z); }
  static Expr y() { return variable(Var::Y); }

  // Smart constructors: fold constants and the usual 0/1 identities so that
  // differentiation of a v-free expression collapses to the literal zero.
  static Expr add(const Expr& a, const Expr& b);
  static Expr sub(const Expr& a, const Expr& b);
  static Expr mul(const Expr& a, const Expr& b);
  static Expr div(const Expr& a, const Expr& b);
  static Expr neg(const Expr& a);
  static Expr pow(const Expr& base, const Rational& exponent);
  static Expr exp(const Expr& a);
  static Expr ln(const Expr& a);
  static Expr sqrt(const Expr& a);

  friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
  Expr operator-() const { return neg(*this); }

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }

  bool is_zero() const;
  bool is_constant() const { return node_->kind == Node::Kind::Number; }

  // Structural equality.
  bool same(const Expr& o) const;

  // Exact partial derivative with respect to v.
  Expr diff(Var v) const;

  // IEEE double value at a point.  guard > 0 turns near-singular
  // denominators and ln/sqrt arguments into GuardViolation; scale_out, when
  // given, receives the largest |subterm| encountered (used for relative
  // residuals).
  double eval(const EvalPoint& p, double guard = 0.0,
              double* scale_out = nullptr) const;

  // Complex evaluation: sqrt/ln of negative arguments take the principal
  // branch instead of failing.  Used by the Lax machinery where U = sqrt(B)
  // may be imaginary.
  std::complex<double> eval_complex(const EvalPoint& p) const;

  // Canonical text form; parse(print(e)) reproduces e structurally.
  std::string print() const;
  // print() with a hard output cap: nullopt when the rendering would
  // exceed max_len (shared subtrees unfold in text, so this can happen for
  // machine-built graphs even when node_count() is modest).
  std::optional<std::string> print_bounded(size_t max_len) const;
  // Length-capped rendering for diagnostics (may be truncated with "...").
  std::string print_preview(size_t max_len = 120) const;
  std::string to_latex() const;

  // True when the tree contains only +,-,*,/ and rational powers (no
  // exp/ln/sqrt and no inexact constants).
  bool is_rational_tree() const;

  bool depends_on(Var v) const;
  // Unique node count (shared subtrees counted once).
  size_t node_count() const;

 private:
  NodePtr node_;
};

// Grammar: identifiers [a-zA-Z_][a-zA-Z0-9_]*, reserved variables z and y,
// functions exp/ln/sqrt, operators + - * / ^ (with ^ right-associative and
// binding tighter than unary minus), parentheses, decimal or integer
// literals.  Implicit multiplication is a syntax error.
Expr parse(const std::string& text);

// Single-quotient form p/q with p, q expanded polynomials in z, y and the
// parameters.  Inputs containing exp/ln/sqrt/non-integer powers (or whose
// exact arithmetic overflows int64) are returned unchanged with
// was_rational = false.
struct NormalizedRational {
  Expr expr;
  bool was_rational = false;
};
NormalizedRational normalize_rational(const Expr& e);

}  // namespace laxquad
