#pragma once

#include "expr.hpp"
#include "sampling.hpp"

namespace laxquad {

struct InvalidSystem : std::runtime_error {
  explicit InvalidSystem(const std::string& what) : std::runtime_error(what) {}
};

// The equation y'' + f(z,y) y' + g(z,y) = 0 with bound parameters and the
// sampling domain its identity checks run on.
struct OdeSystem {
  Expr f, g;
  ParamBinding params;
  SampleDomain domain;

  OdeSystem() = default;
  OdeSystem(Expr f_, Expr g_, ParamBinding params_ = {},
            SampleDomain domain_ = {})
      : f(std::move(f_)),
        g(std::move(g_)),
        params(std::move(params_)),
        domain(domain_) {}

  // Enforces f != 0, g != 0 and nonlinearity (f_y and g_yy not both zero).
  void validate() const;

  // Corollary-style analyses need f = 0 or g = 0 admitted; this skips the
  // nonvanishing check but keeps the rest.
  void validate_relaxed() const;

  double eval_f(double z, double y, double guard = 0.0) const {
    return f.eval({z, y, &params}, guard);
  }
  double eval_g(double z, double y, double guard = 0.0) const {
    return g.eval({z, y, &params}, guard);
  }
};

}  // namespace laxquad
