#pragma once

// Moments of M(alpha) over the full circle and over the major/minor regions,
// plus the comparison of measured full moments against the predicted main
// term.
//
// All moments are equispaced Riemann sums on FFT grids with doubling until
// the relative change is below tolerance.  For region moments a grid point
// j/N belongs to the major region exactly when it lies in one of the closed
// arcs of the supplied system (membership is resolved against the arc list,
// so synthetic systems behave literally); for systems produced by
// enumerate_major_arcs this agrees with classify_alpha, since an approximation
// that good at that scale is necessarily a continued fraction convergent.
//
// At s = 2 the full moment collapses to Parseval: integral_0^1 |M|^2 equals
// sum_{n <= X} tau_k(n)^2, which pins the entire FFT + summation pipeline.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "circlelab/dissection.hpp"
#include "circlelab/divisor_sieve.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/major_arc.hpp"
#include "circlelab/numeric.hpp"
#include "circlelab/quadrature.hpp"

namespace circlelab {

namespace detail {

// |z|^s with the even integer cases kept in pure multiplications.
inline double abs_pow(const std::complex<double>& z, double s) {
  const double n2 = z.real() * z.real() + z.imag() * z.imag();
  if (s == 2.0) return n2;
  if (s == 4.0) return n2 * n2;
  if (s == 6.0) return n2 * n2 * n2;
  return std::pow(n2, 0.5 * s);
}

// Membership of x in the closed arc system, wrapped on the circle.
inline bool in_major(double x, const std::vector<double>& centers, double hw) {
  if (centers.empty()) return false;
  auto it = std::lower_bound(centers.begin(), centers.end(), x);
  if (it != centers.end() && *it - x <= hw) return true;
  if (it != centers.begin() && x - *(it - 1) <= hw) return true;
  // wraparound: distance from the tail of the circle to the arc at 0/1
  if (it == centers.end() && (1.0 - x) + centers.front() <= hw) return true;
  return false;
}

}  // namespace detail

// integral_0^1 |M|^s by grid doubling; N starts at the first power of two
// >= max(start_factor X, X + 1).
inline MomentEstimate total_moment(const DivisorTable& t, double s, QuadConfig cfg = {},
                                   i64 grid_capacity = kDefaultGridCapacity) {
  if (!(s >= 2.0)) throw std::domain_error("total_moment: s must be >= 2");
  const auto eval = [&](i64 N) {
    const ExpSumGrid g = eval_expsum_grid(t, N, grid_capacity);
    std::vector<double> parts(static_cast<std::size_t>(N));
    for (i64 j = 0; j < N; ++j)
      parts[static_cast<std::size_t>(j)] = detail::abs_pow(g.values[static_cast<std::size_t>(j)], s);
    return pairwise_sum(parts) / static_cast<double>(N);
  };
  const i64 N0 = next_pow2(std::max(cfg.start_factor * t.X, t.X + 1));
  return refine_doubling(eval, N0, s, Region::Full, cfg);
}

// Same Riemann sum restricted to one side of the dissection.
inline MomentEstimate region_moment(const DivisorTable& t, double s, const MajorArcSystem& sys,
                                    Region region, QuadConfig cfg = {},
                                    i64 grid_capacity = kDefaultGridCapacity) {
  if (!(s >= 2.0)) throw std::domain_error("region_moment: s must be >= 2");
  std::vector<double> centers;
  centers.reserve(sys.arcs.size());
  for (const MajorArc& arc : sys.arcs) centers.push_back(arc.center);
  std::sort(centers.begin(), centers.end());
  const double hw = sys.halfwidth;

  const auto eval = [&](i64 N) {
    const ExpSumGrid g = eval_expsum_grid(t, N, grid_capacity);
    std::vector<double> parts(static_cast<std::size_t>(N));
    for (i64 j = 0; j < N; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(N);
      const bool is_major = detail::in_major(x, centers, hw);
      const bool keep = region == Region::Full || (region == Region::Major) == is_major;
      parts[static_cast<std::size_t>(j)] =
          keep ? detail::abs_pow(g.values[static_cast<std::size_t>(j)], s) : 0.0;
    }
    return pairwise_sum(parts) / static_cast<double>(N);
  };
  const i64 N0 = next_pow2(std::max(cfg.start_factor * t.X, t.X + 1));
  return refine_doubling(eval, N0, s, region, cfg);
}

// ---------------------------------------------------------------------------
// measured moment vs predicted main term

struct ComparisonRow {
  i64 X = 0;
  double full = 0.0;        // measured integral_0^1 |M|^s
  double prediction = 0.0;  // X^{s-1} (log X)^{s(k-1)} sum_l gamma_l / (log X)^l
  double ratio = 0.0;       // full / prediction
};

struct ComparisonReport {
  double s = 0.0;
  int k = 0;
  int L = 0;
  std::vector<ComparisonRow> rows;
  bool all_positive = false;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool drift_non_increasing = false;  // |log ratio| step shrank from first to last
};

// Report only: the ratio column should be positive, bounded, and its log
// drift between consecutive X should not grow once the main term dominates.
inline ComparisonReport theorem_comparison(double s, int k, const std::vector<i64>& Xs,
                                           const GammaSeries& g, int L = 0, QuadConfig cfg = {},
                                           i64 table_capacity = kDefaultTableCapacity) {
  if (Xs.size() < 2) throw std::invalid_argument("theorem_comparison: need at least 2 values of X");
  for (std::size_t i = 0; i + 1 < Xs.size(); ++i)
    if (Xs[i] >= Xs[i + 1])
      throw std::invalid_argument("theorem_comparison: Xs must be strictly increasing");

  ComparisonReport rep;
  rep.s = s;
  rep.k = k;
  rep.L = L;
  for (i64 X : Xs) {
    const DivisorTable t = build_divisor_table(k, X, table_capacity);
    ComparisonRow row;
    row.X = X;
    row.full = total_moment(t, s, cfg).value;
    row.prediction = predict_main_term(g, static_cast<double>(X), L).value;
    row.ratio = row.full / row.prediction;
    rep.rows.push_back(row);
  }

  rep.all_positive = true;
  rep.min_ratio = HUGE_VAL;
  rep.max_ratio = -HUGE_VAL;
  for (const ComparisonRow& r : rep.rows) {
    if (!(r.ratio > 0.0) || !std::isfinite(r.ratio)) rep.all_positive = false;
    rep.min_ratio = std::min(rep.min_ratio, r.ratio);
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  if (rep.all_positive && rep.rows.size() >= 3) {
    const double first = std::fabs(std::log(rep.rows[1].ratio / rep.rows[0].ratio));
    const std::size_t n = rep.rows.size();
    const double last = std::fabs(std::log(rep.rows[n - 1].ratio / rep.rows[n - 2].ratio));
    rep.drift_non_increasing = last <= first * (1.0 + 1e-9);
  } else {
    rep.drift_non_increasing = rep.all_positive;
  }
  return rep;
}

}  // namespace circlelab
