#pragma once

#include <array>
#include <complex>

#include "odesolve.hpp"

namespace laxquad {

using Complex = std::complex<double>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

// sl(2) pair built from a first integral: L = [[y'+F, U],[U, -(y'+F)]] with
// F = A and U = sqrt(B), M = [[0, m],[-m, 0]] with m = B_y/(4U).  U is taken
// as the principal complex root where B < 0.
struct LaxPair {
  FirstIntegral fi;
  bool degenerate = false;   // B identically zero: L diagonal, M = 0
  bool closed_U = false;     // U (and U_y) available symbolically
  Expr U_expr, M_expr;       // valid when closed_U
  std::shared_ptr<const ParamBinding> params;

  Complex F(double z, double y) const { return fi.A.value(z, y); }
  Complex U(double z, double y) const;
  Complex M_offdiag(double z, double y) const;  // B_y / (4U)
  Complex U_y(double z, double y) const;        // B_y / (2U)
  Complex U_z(double z, double y) const;        // B_z / (2U)

  Matrix2 L(double z, double y, double yp) const;
  Matrix2 M(double z, double y) const;
};

struct BuildLaxError : std::runtime_error {
  explicit BuildLaxError(const std::string& what) : std::runtime_error(what) {}
};

// Requires the first integral to satisfy its defining relations (checked via
// it5_residuals at `tol`); strict=false skips the gate so that failing pairs
// can still be measured.
LaxPair build_lax(const FirstIntegral& fi, const OdeSystem& sys,
                  double tol = 1e-6, bool strict = true);

struct LaxResidualReport {
  double max_residual = 0.0;  // Frobenius norm of dL/dz - [L, M]
  std::vector<double> per_sample;
  bool complex_domain = false;  // some sample had B < 0
  int skipped = 0;
};

// dL/dz along the trajectory with y'' eliminated through the equation of
// motion; compared against [L, M] sample by sample.
LaxResidualReport lax_residual(const LaxPair& lp, const OdeSystem& sys,
                               const Trajectory& traj);

// Secondary oracle: dL/dz by central differences of the actual L entries
// along short re-integrations from each sample (an order of magnitude looser
// than the analytic route, but independent of the pair's internal
// identities).
LaxResidualReport lax_residual_fd(const LaxPair& lp, const OdeSystem& sys,
                                  const Trajectory& traj, double h = 1e-4);

// tr(L^k)/k! at a point, k <= 8, by direct matrix powers.
Complex trace_invariant(const LaxPair& lp, int k, double z, double y,
                        double yp);

// Eigenvalues +/- sqrt((y'+F)^2 + U^2) of L.
std::pair<Complex, Complex> eigenvalues(const LaxPair& lp, double z, double y,
                                        double yp);

}  // namespace laxquad
