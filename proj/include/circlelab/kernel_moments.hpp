#pragma once

// Moments of the geometric kernel and the archimedean constant
//
//     A_s = (2/pi) * integral_0^inf |sin t|^s t^{-s} dt,   s >= 2,
//
// with A_2 = 1 and A_4 = 2/3 exactly.  The unit-circle moment of the kernel
// satisfies
//
//     integral_0^1 |v(beta)|^s d beta = A_s X^{s-1} + E(X),   E(X) = O(X^{s-2}),
//
// and for even integer s the equispaced Riemann sum is exact once the grid
// has more than s X points, which pins the quadrature error down to rounding.

#include <cmath>
#include <cstdint>
#include <vector>

#include "circlelab/errors.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/numeric.hpp"
#include "circlelab/quadrature.hpp"

namespace circlelab {

struct AsValue {
  double s = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the discarded integral past T
  double tol = 0.0;
};

// Truncate at T with (2/pi) * T^{1-s} / (s-1) <= tol/2, then integrate period
// by period with a composite 16 point Gauss-Legendre rule, doubling the
// panels per period until two passes agree to tol/4.  |sin t|^s is smooth
// inside each period, so the panel doubling settles quickly; the budget
// throws non_convergence_error rather than returning a stale value.
inline AsValue compute_As(double s, double tol = 1e-8) {
  if (!(s >= 2.0)) throw std::domain_error("compute_As: s must be >= 2");
  if (!(tol > 0.0) || tol >= 1.0) throw std::domain_error("compute_As: tol must be in (0,1)");

  const double pi = std::numbers::pi;
  const double T_raw = std::pow(4.0 / (pi * (s - 1.0) * tol), 1.0 / (s - 1.0));
  const i64 periods = std::max<i64>(4, static_cast<i64>(std::ceil(T_raw / pi)));
  const double T = static_cast<double>(periods) * pi;

  const auto integrand = [s](double t) {
    if (t < 1e-9) return 1.0;  // limit of (sin t / t)^s at 0
    return std::pow(std::fabs(std::sin(t)) / t, s);
  };

  double prev = 0.0;
  for (int level = 0;; ++level) {
    const int panels = 1 << level;
    std::vector<double> parts(static_cast<std::size_t>(periods));
    for (i64 m = 0; m < periods; ++m)
      parts[static_cast<std::size_t>(m)] =
          integrate_gl16(integrand, static_cast<double>(m) * pi,
                         static_cast<double>(m + 1) * pi, panels);
    const double cur = (2.0 / pi) * pairwise_sum(parts);
    if (level > 0 && std::fabs(cur - prev) <= 0.25 * tol) {
      AsValue a;
      a.s = s;
      a.value = cur;
      a.tail_bound = (2.0 / pi) * std::pow(T, 1.0 - s) / (s - 1.0);
      a.tol = tol;
      return a;
    }
    if (level >= 6)
      throw non_convergence_error("compute_As: panel refinement stalled", cur, prev);
    prev = cur;
  }
}

// integral_0^1 |v(beta)|^s d beta by grid doubling from N = start_factor * X.
inline MomentEstimate kernel_moment(i64 X, double s, QuadConfig cfg = {1e-8, 14, 8}) {
  if (X < 1) throw std::invalid_argument("kernel_moment: X must be >= 1");
  if (!(s >= 2.0)) throw std::domain_error("kernel_moment: s must be >= 2");
  const auto eval = [X, s](i64 N) {
    std::vector<double> parts(static_cast<std::size_t>(N));
    for (i64 j = 0; j < N; ++j) {
      const double mag = dirichlet_kernel(X, static_cast<double>(j) / static_cast<double>(N)).magnitude;
      parts[static_cast<std::size_t>(j)] = std::pow(mag, s);
    }
    return pairwise_sum(parts) / static_cast<double>(N);
  };
  return refine_doubling(eval, cfg.start_factor * X, s, Region::Full, cfg);
}

// ---------------------------------------------------------------------------
// asymptotic verification

struct KernelAsymptoticRow {
  i64 X = 0;
  double moment = 0.0;
  double main_term = 0.0;  // A_s X^{s-1}
  double error = 0.0;      // |moment - main_term|
  double ratio = 0.0;      // error / X^{s-2}
};

struct KernelAsymptoticReport {
  double s = 0.0;
  double As = 0.0;
  double fitted_constant = 0.0;  // max of the ratio column
  bool passed = false;           // ratios finite and non-increasing on the top half
  std::vector<KernelAsymptoticRow> rows;
};

// Measures E(X) = |moment - A_s X^{s-1}| across increasing X and checks that
// E(X)/X^{s-2} stays bounded and is non-increasing over the top half of the
// range.  The pass flag is meaningful when E(X) dominates quadrature noise;
// for even integer s the moment itself is exact and only rounding remains.
inline KernelAsymptoticReport verify_kernel_asymptotic(double s, const std::vector<i64>& Xs,
                                                       double as_tol = 1e-9,
                                                       QuadConfig cfg = {1e-8, 18, 8}) {
  if (Xs.size() < 2) throw std::invalid_argument("verify_kernel_asymptotic: need at least 2 values of X");
  for (std::size_t i = 0; i + 1 < Xs.size(); ++i)
    if (Xs[i] >= Xs[i + 1])
      throw std::invalid_argument("verify_kernel_asymptotic: Xs must be strictly increasing");

  KernelAsymptoticReport rep;
  rep.s = s;
  rep.As = compute_As(s, as_tol).value;
  for (i64 X : Xs) {
    KernelAsymptoticRow row;
    row.X = X;
    row.moment = kernel_moment(X, s, cfg).value;
    row.main_term = rep.As * std::pow(static_cast<double>(X), s - 1.0);
    row.error = std::fabs(row.moment - row.main_term);
    row.ratio = row.error / std::pow(static_cast<double>(X), s - 2.0);
    rep.rows.push_back(row);
  }

  rep.fitted_constant = 0.0;
  bool ok = true;
  for (const KernelAsymptoticRow& r : rep.rows) {
    if (!std::isfinite(r.ratio)) ok = false;
    rep.fitted_constant = std::max(rep.fitted_constant, r.ratio);
  }
  const std::size_t half = rep.rows.size() / 2;
  for (std::size_t i = half; i + 1 < rep.rows.size(); ++i)
    if (rep.rows[i + 1].ratio > rep.rows[i].ratio * (1.0 + 1e-12)) ok = false;
  rep.passed = ok;
  return rep;
}

}  // namespace circlelab
