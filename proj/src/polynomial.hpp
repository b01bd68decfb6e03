#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "expr.hpp"
#include "rational.hpp"

namespace laxquad {

// Shared variable table for a polynomial computation.  Index 0 is z and
// index 1 is y; parameters are appended in order of first appearance.
struct VarTable {
  std::vector<std::string> names{"z", "y"};

  size_t index_of(const std::string& name) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    names.push_back(name);
    return names.size() - 1;
  }
};

// Sparse multivariate polynomial over exact rationals.  Monomials are
// exponent vectors ordered lexicographically by std::map, which keeps every
// traversal deterministic.
class Poly {
 public:
  using Monomial = std::vector<int>;
  using Coeff = BigRational;

  Poly() = default;
  static Poly constant(const Coeff& c, size_t nvars);
  static Poly variable(size_t idx, size_t nvars);

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  size_t nvars() const { return nvars_; }
  const std::map<Monomial, Coeff>& terms() const { return terms_; }

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly pow_int(long long k) const;
  Poly padded_to(size_t nvars) const;
  bool is_constant() const;

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  // Exact polynomial division: returns the quotient when the divisor divides
  // exactly, nullopt otherwise.
  static std::optional<Poly> try_divide(const Poly& num, const Poly& den);

  // Exact square root when the polynomial is a perfect square.
  std::optional<Poly> sqrt_exact() const;

  // Degree in one variable.
  int degree_in(size_t var) const;

  // Per-variable minimum exponent over all terms (the monomial content);
  // divide_monomial removes it.
  Monomial content_monomial() const;
  Poly divided_by_monomial(const Monomial& m) const;

  // Rebuild an expression (terms in descending lex order).  Coefficients
  // that no longer fit the expression layer's rationals raise ExactOverflow.
  Expr to_expr(const VarTable& vars) const;

  void add_term(const Monomial& m, const Coeff& c);
  void set_nvars(size_t n) { nvars_ = n; }

 private:
  size_t nvars_ = 0;
  std::map<Monomial, Coeff> terms_;
};

// Expression -> p/q over a shared variable table.  Throws ExactOverflow or
// NotRational when the tree cannot be represented.
struct NotRational : std::runtime_error {
  NotRational() : std::runtime_error("expression is not rational") {}
};

struct RationalForm {
  Poly num, den;
  VarTable vars;
};

// Converts a rational tree to a single quotient of expanded polynomials and
// cancels exact polynomial factors.  Throws NotRational / ExactOverflow.
// The budget caps total intermediate term counts.
RationalForm to_rational_form(const Expr& e, size_t node_budget = 400000);

}  // namespace laxquad
