#pragma once

#include <cstdint>
#include <vector>

#include "expr.hpp"

namespace laxquad {

inline constexpr double kDefaultIdentityTol = 1e-9;
inline constexpr double kDefaultGuard = 1e-6;
inline constexpr int kDefaultSampleCount = 64;
inline constexpr uint64_t kDefaultSeed = 7;

struct DomainCoverageError : std::runtime_error {
  explicit DomainCoverageError(const std::string& what)
      : std::runtime_error(what) {}
};

// Rectangle in (z, y) with an admissibility guard and a seeded sample
// budget.  The seed is recorded in reports so verdicts reproduce exactly.
struct SampleDomain {
  double z_min = 0.1, z_max = 2.0;
  double y_min = 0.1, y_max = 2.0;
  double guard = kDefaultGuard;
  int count = kDefaultSampleCount;
  uint64_t seed = kDefaultSeed;

  void validate() const {
    if (!(z_min < z_max) || !(y_min < y_max))
      throw std::invalid_argument("degenerate sample domain");
    if (!(guard > 0.0)) throw std::invalid_argument("guard must be positive");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
  }
};

// Deterministic uniform generator (splitmix64 stream mapped to [0,1)).
// mt19937's real distribution is implementation-defined; this one is stable
// across standard libraries.
class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : state_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next01();
  }

 private:
  double next01() {
    uint64_t x = (state_ += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  uint64_t state_;
};

// `count` admissible points for `probe`: points where instrumented
// evaluation hits no guard violation.  After `count` rejections in a row a
// DomainCoverageError is raised.
std::vector<EvalPoint> admissible_points(const Expr& probe,
                                         const SampleDomain& dom,
                                         const ParamBinding& params);

// max over admissible samples of |e| / (1 + scale), where scale is the
// largest |subterm| seen while evaluating e at that point.
double max_relative_residual(const Expr& e, const SampleDomain& dom,
                             const ParamBinding& params);

// Numeric-first identity test with an exact fast path: when e is a rational
// tree whose expanded numerator is the zero polynomial (parameters treated
// symbolically), the answer is exact; otherwise the sampled relative
// residual decides.
bool is_identically_zero(const Expr& e, const SampleDomain& dom,
                         const ParamBinding& params,
                         double tol = kDefaultIdentityTol);

}  // namespace laxquad
