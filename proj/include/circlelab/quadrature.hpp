#pragma once

// Grid-doubling Riemann quadrature on the unit circle.
//
// Moments are estimated on equispaced grids j/N and the grid is doubled
// until the relative change drops below tolerance; the estimate keeps the
// final grid size, the number of doublings, and the last observed change so
// callers can reason about additivity of regions at tolerance level.

#include <cmath>
#include <cstdint>

#include "circlelab/errors.hpp"
#include "circlelab/numeric.hpp"

namespace circlelab {

enum class Region { Full, Major, Minor };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Full: return "full";
    case Region::Major: return "major";
    case Region::Minor: return "minor";
  }
  return "?";
}

struct QuadConfig {
  double rel_tol = 1e-6;
  int max_doublings = 14;   // grids evaluated = at most max_doublings + 1
  i64 start_factor = 8;     // first grid has N >= start_factor * X
};

struct MomentEstimate {
  double s = 0.0;
  Region region = Region::Full;
  double value = 0.0;
  i64 grid_N = 0;
  int refinements = 0;      // doublings actually performed
  double last_delta = 0.0;  // |value - previous| / max(|value|, tiny)
};

// eval(N) must return the N-point Riemann estimate.  Doubles N until two
// consecutive grids agree to cfg.rel_tol; throws non_convergence_error with
// the last two estimates when the budget runs out.  Zero-valued moments
// (empty regions) compare absolutely against tiny.
template <class F>
MomentEstimate refine_doubling(F&& eval, i64 N0, double s, Region region,
                               const QuadConfig& cfg) {
  if (N0 < 2) throw std::invalid_argument("refine_doubling: N0 must be >= 2");
  if (cfg.rel_tol <= 0) throw std::invalid_argument("refine_doubling: rel_tol must be > 0");

  constexpr double tiny = 1e-300;
  i64 N = N0;
  double prev = eval(N);
  double before_prev = prev;
  for (int d = 1; d <= cfg.max_doublings; ++d) {
    N *= 2;
    const double cur = eval(N);
    const double delta = std::fabs(cur - prev) / std::max(std::fabs(cur), tiny);
    if (delta <= cfg.rel_tol || (cur == 0.0 && prev == 0.0)) {
      MomentEstimate e;
      e.s = s;
      e.region = region;
      e.value = cur;
      e.grid_N = N;
      e.refinements = d;
      e.last_delta = delta;
      return e;
    }
    before_prev = prev;
    prev = cur;
  }
  throw non_convergence_error("refine_doubling: tolerance not met within doubling budget",
                              prev, before_prev);
}

}  // namespace circlelab
