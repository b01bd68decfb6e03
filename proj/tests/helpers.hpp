#pragma once

#include <cmath>
#include <random>

#include "classify.hpp"
#include "integral.hpp"
#include "sampling.hpp"

namespace laxquad::testing {

// Central finite difference, the independent oracle for symbolic derivatives.
inline double central_diff(const Expr& e, Var v, const EvalPoint& p,
                           double h = 1e-6) {
  EvalPoint hi = p, lo = p;
  (v == Var::Z ? hi.z : hi.y) += h;
  (v == Var::Z ? lo.z : lo.y) -= h;
  return (e.eval(hi) - e.eval(lo)) / (2.0 * h);
}

// Seeded generator of random rational expression trees over z, y and one
// parameter "a".  Depth-bounded; only +, -, *, /, small integer powers.
class RandomExpr {
 public:
  explicit RandomExpr(uint64_t seed) : rng_(seed) {}

  Expr leaf() {
    switch (rng_() % 5) {
      case 0: return Expr::z();
      case 1: return Expr::y();
      case 2: return Expr::param("a");
      case 3: return Expr::integer(static_cast<int>(rng_() % 5) - 2);
      default: return Expr::integer(static_cast<int>(rng_() % 3) + 1);
    }
  }

  Expr gen(int depth) {
    if (depth <= 0) return leaf();
    switch (rng_() % 6) {
      case 0: return gen(depth - 1) + gen(depth - 1);
      case 1: return gen(depth - 1) - gen(depth - 1);
      case 2: return gen(depth - 1) * gen(depth - 1);
      case 3: return gen(depth - 1) / nonzero_leafish(depth - 1);
      case 4: return Expr::pow(gen(depth - 1),
                               Rational(static_cast<int>(rng_() % 3) + 1));
      default: return -gen(depth - 1);
    }
  }

  // Denominators built to stay away from zero on the positive quadrant.
  Expr nonzero_leafish(int depth) {
    Expr base = depth > 0 && rng_() % 2 ? gen(depth - 1) : leaf();
    return base * base + Expr::integer(static_cast<int>(rng_() % 3) + 1);
  }

 private:
  std::mt19937_64 rng_;
};

// Random polynomial in y of bounded degree with nonzero leading coefficient.
inline Expr random_poly_y(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Expr out = Expr::integer(0);
  int deg = 1 + static_cast<int>(rng() % max_degree);
  for (int k = 0; k <= deg; ++k) {
    int c = coef(rng);
    if (k == deg && c == 0) c = 1;
    if (c == 0) continue;
    Expr term = Expr::integer(c);
    if (k > 0) term = term * Expr::pow(Expr::y(), Rational(k));
    out = out + term;
  }
  return out;
}

inline OdeSystem make_system(const std::string& f, const std::string& g,
                             ParamBinding params = {}, SampleDomain dom = {}) {
  return OdeSystem(parse(f), parse(g), std::move(params), dom);
}

}  // namespace laxquad::testing
