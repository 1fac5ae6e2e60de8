#pragma once

// Small numeric kernel shared by the rest of the library: deterministic
// summation, distance to the nearest integer, power-of-two helpers, a fixed
// 16 point Gauss-Legendre rule, and a Householder QR least squares solver.
//
// All reductions are pairwise with a fixed association order, so results are
// reproducible bit for bit across runs on the same platform.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "circlelab/errors.hpp"

namespace circlelab {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// ---------------------------------------------------------------------------
// summation

// Pairwise sum with a fixed split; error grows like O(log n) ulps instead of
// O(n) for the running sum, and the association order never depends on data.
inline double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// ---------------------------------------------------------------------------
// elementary helpers

// Fractional part in [0,1).
inline double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // guard against floor rounding at integers
  return f;
}

// Distance from x to the nearest integer, in [0, 1/2].
inline double dist_to_nearest_int(double x) {
  const double f = frac(x);
  return f <= 0.5 ? f : 1.0 - f;
}

inline bool is_pow2(i64 n) { return n > 0 && (n & (n - 1)) == 0; }

inline i64 next_pow2(i64 n) {
  i64 p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline i64 isqrt(i64 n) {
  if (n < 0) return 0;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre, 16 points on [-1,1]

inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};

inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

// Integrate f over [a,b] split into `panels` equal panels, 16 point rule on
// each.  Panel contributions are collected and pairwise summed.
template <class F>
double integrate_gl16(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  std::vector<double> parts(static_cast<std::size_t>(panels));
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < kGL16Nodes.size(); ++i) {
      const double dx = half * kGL16Nodes[i];
      s += kGL16Weights[i] * (f(mid - dx) + f(mid + dx));
    }
    parts[static_cast<std::size_t>(p)] = s * half;
  }
  return pairwise_sum(parts);
}

// ---------------------------------------------------------------------------
// least squares

struct LeastSquaresResult {
  std::vector<double> coeffs;     // minimiser of ||A c - y||_2
  double cond = 0.0;              // max|R_ii| / min|R_ii| from the QR factor
  std::vector<double> residuals;  // y - A c, row by row
};

// Dense Householder QR least squares for small systems (rows m >= cols n).
// `a` is row major, m*n entries.  Throws ill_conditioned_error when the
// diagonal ratio of R exceeds `cond_limit`.
inline LeastSquaresResult least_squares(std::vector<double> a, std::vector<double> y,
                                        std::size_t m, std::size_t n,
                                        double cond_limit = 1e12) {
  if (m < n || a.size() != m * n || y.size() != m)
    throw std::invalid_argument("least_squares: shape mismatch");

  const std::vector<double> a0 = a;  // kept for residuals
  const std::vector<double> y0 = y;

  std::vector<double> rdiag(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    // Householder vector for column j, rows j..m-1.
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm = std::hypot(norm, a[i * n + j]);
    if (norm == 0.0) throw ill_conditioned_error("least_squares: zero column", HUGE_VAL);
    if (a[j * n + j] < 0) norm = -norm;
    for (std::size_t i = j; i < m; ++i) a[i * n + j] /= norm;
    a[j * n + j] += 1.0;

    // Apply to remaining columns and to y.
    for (std::size_t k = j + 1; k < n; ++k) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += a[i * n + j] * a[i * n + k];
      s = -s / a[j * n + j];
      for (std::size_t i = j; i < m; ++i) a[i * n + k] += s * a[i * n + j];
    }
    double s = 0.0;
    for (std::size_t i = j; i < m; ++i) s += a[i * n + j] * y[i];
    s = -s / a[j * n + j];
    for (std::size_t i = j; i < m; ++i) y[i] += s * a[i * n + j];

    rdiag[j] = -norm;
  }

  double dmax = 0.0, dmin = HUGE_VAL;
  for (double d : rdiag) {
    dmax = std::max(dmax, std::fabs(d));
    dmin = std::min(dmin, std::fabs(d));
  }
  const double cond = dmin > 0 ? dmax / dmin : HUGE_VAL;
  if (cond > cond_limit)
    throw ill_conditioned_error("least_squares: system near singular", cond);

  LeastSquaresResult r;
  r.cond = cond;
  r.coeffs.assign(n, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    double s = y[j];
    for (std::size_t k = j + 1; k < n; ++k) s -= a[j * n + k] * r.coeffs[k];
    r.coeffs[j] = s / rdiag[j];
  }

  r.residuals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double pred = 0.0;
    for (std::size_t k = 0; k < n; ++k) pred += a0[i * n + k] * r.coeffs[k];
    r.residuals[i] = y0[i] - pred;
  }
  return r;
}

}  // namespace circlelab
