#include "ode_system.hpp"

namespace laxquad {

void OdeSystem::validate() const {
  domain.validate();
  if (is_identically_zero(f, domain, params))
    throw InvalidSystem("f must not vanish identically");
  if (is_identically_zero(g, domain, params))
    throw InvalidSystem("g must not vanish identically");
  validate_relaxed();
}

void OdeSystem::validate_relaxed() const {
  domain.validate();
  bool fy_zero = is_identically_zero(f.diff(Var::Y), domain, params);
  bool gyy_zero = is_identically_zero(g.diff(Var::Y).diff(Var::Y), domain, params);
  if (fy_zero && gyy_zero)
    throw InvalidSystem(
        "linear equation: f_y and g_yy both vanish identically");
}

}  // namespace laxquad
