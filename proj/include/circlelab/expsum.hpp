#pragma once

// Evaluation of the weighted exponential sum
//
//     M(alpha) = sum_{n <= X} tau_k(n) e(n alpha),        e(t) = exp(2 pi i t),
//
// three ways: directly at one point, on a full equispaced grid via FFT, and
// twisted by an exact rational point a/q through residue class subtotals.
// Also the unweighted geometric kernel
//
//     v(beta) = sum_{n <= X} e(n beta) = e((X+1) beta / 2) sin(pi X beta) / sin(pi beta),
//
// whose magnitude obeys |v(beta)| <= min(X, 1 / (2 ||beta||)).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "circlelab/divisor_sieve.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/fft.hpp"
#include "circlelab/numeric.hpp"
#include "circlelab/quadrature.hpp"

namespace circlelab {

// Entry budget for one grid; 2^24 complex doubles = 256 MiB.
inline constexpr i64 kDefaultGridCapacity = i64(1) << 24;

namespace detail {

// e(x) with the argument reduced in long double; keeps the phase accurate
// for |x| up to ~1e12.
inline std::complex<double> unit_phase(long double x) {
  const long double f = x - std::floor(x);
  const long double t = 2.0L * std::numbers::pi_v<long double> * f;
  return {static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t))};
}

}  // namespace detail

// One-point evaluation in O(X): multiplicative phase recurrence with a fresh
// anchor every 4096 steps so rounding drift stays near machine precision.
inline std::complex<double> eval_expsum_direct(const DivisorTable& t, double alpha) {
  const std::complex<double> w = detail::unit_phase(static_cast<long double>(alpha));
  std::complex<double> z = 1.0;
  std::complex<double> acc = 0.0;
  for (i64 n = 1; n <= t.X; ++n) {
    if ((n & 4095) == 1)
      z = detail::unit_phase(static_cast<long double>(n) * static_cast<long double>(alpha));
    else
      z *= w;
    acc += static_cast<double>(t.values[static_cast<std::size_t>(n)]) * z;
  }
  return acc;
}

// M sampled on the full grid alpha = j/N, j = 0..N-1.
//
// values[0] = sum tau_k(n) = M(0); since the weights are real the grid obeys
// values[N-j] = conj(values[j]).
struct ExpSumGrid {
  int k = 0;
  i64 X = 0;
  i64 N = 0;
  std::vector<std::complex<double>> values;

  std::complex<double> at(i64 j) const {
    return values[static_cast<std::size_t>(((j % N) + N) % N)];
  }
};

inline ExpSumGrid eval_expsum_grid(const DivisorTable& t, i64 N,
                                   i64 capacity = kDefaultGridCapacity) {
  if (!is_pow2(N)) throw std::invalid_argument("eval_expsum_grid: N must be a power of two");
  if (N < t.X + 1)
    throw std::invalid_argument("eval_expsum_grid: N must be >= X + 1 (no aliasing)");
  if (N > capacity) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "eval_expsum_grid: N = %lld exceeds capacity of %lld",
                  static_cast<long long>(N), static_cast<long long>(capacity));
    throw capacity_error(msg);
  }
  ExpSumGrid g;
  g.k = t.k;
  g.X = t.X;
  g.N = N;
  g.values.assign(static_cast<std::size_t>(N), {0.0, 0.0});
  for (i64 n = 1; n <= t.X; ++n)
    g.values[static_cast<std::size_t>(n)] = static_cast<double>(t.values[static_cast<std::size_t>(n)]);
  fft(g.values, +1);  // X[j] = sum_n tau(n) e(+ jn / N)
  return g;
}

// ---------------------------------------------------------------------------
// geometric kernel

struct KernelValue {
  i64 X = 0;
  double beta_reduced = 0.0;  // representative in [-1/2, 1/2]
  double magnitude = 0.0;
  std::complex<double> value;
};

// Closed form away from beta ~ 0; direct summation once ||beta|| < 1/(64 X),
// where the sine quotient loses digits to cancellation.  The phase arguments
// X beta are reduced mod 2 in long double before the sine call.
inline KernelValue dirichlet_kernel(i64 X, double beta) {
  if (X < 1) throw std::invalid_argument("dirichlet_kernel: X must be >= 1");
  KernelValue kv;
  kv.X = X;
  double r = beta - std::nearbyint(beta);
  if (r == -0.5) r = 0.5;
  kv.beta_reduced = r;
  const double norm = std::fabs(r);

  if (norm < 1.0 / (64.0 * static_cast<double>(X))) {
    std::complex<double> acc = 0.0;
    const std::complex<double> w = detail::unit_phase(static_cast<long double>(r));
    std::complex<double> z = 1.0;
    for (i64 n = 1; n <= X; ++n) {
      if ((n & 4095) == 1)
        z = detail::unit_phase(static_cast<long double>(n) * static_cast<long double>(r));
      else
        z *= w;
      acc += z;
    }
    kv.value = acc;
    kv.magnitude = std::abs(acc);
    return kv;
  }

  const long double pi_l = std::numbers::pi_v<long double>;
  const long double xr = std::fmod(static_cast<long double>(X) * static_cast<long double>(r), 2.0L);
  const long double num = std::sin(pi_l * xr);
  const long double den = std::sin(pi_l * static_cast<long double>(r));
  const long double mag = num / den;
  const long double ph = std::fmod(static_cast<long double>(X + 1) * static_cast<long double>(r), 2.0L);
  const std::complex<double> phase = {static_cast<double>(std::cos(pi_l * ph)),
                                      static_cast<double>(std::sin(pi_l * ph))};
  kv.value = phase * static_cast<double>(mag);
  kv.magnitude = std::fabs(static_cast<double>(mag));
  return kv;
}

// ---------------------------------------------------------------------------
// twisted sums
//
// For reduced a/q, sum_{n <= Y} tau_k(n) e(a n / q) is assembled exactly from
// residue class subtotals: S = sum_{r mod q} e(a r / q) T_r(Y) where
// T_r(Y) = sum_{n <= Y, n = r mod q} tau_k(n).  The subtotals are exact
// integers, so the only rounding is the final q-term complex combination.

inline std::complex<double> twisted_partial_sum(const DivisorTable& t, i64 q, i64 a, i64 Y) {
  if (q < 1) throw std::invalid_argument("twisted_partial_sum: q must be >= 1");
  if (Y < 1 || Y > t.X) throw std::invalid_argument("twisted_partial_sum: Y out of range");
  if (std::gcd(((a % q) + q) % q, q) != 1 && q > 1)
    throw std::invalid_argument("twisted_partial_sum: a/q must be reduced");

  std::vector<u64> residue_total(static_cast<std::size_t>(q), 0);
  for (i64 n = 1; n <= Y; ++n) {
    u64 sum;
    if (__builtin_add_overflow(residue_total[static_cast<std::size_t>(n % q)],
                               t.values[static_cast<std::size_t>(n)], &sum))
      throw value_overflow_error("twisted_partial_sum: residue subtotal overflow",
                                 static_cast<u64>(n));
    residue_total[static_cast<std::size_t>(n % q)] = sum;
  }
  std::complex<double> acc = 0.0;
  for (i64 r = 0; r < q; ++r)
    acc += detail::unit_phase(static_cast<long double>(a) * static_cast<long double>(r) /
                              static_cast<long double>(q)) *
           static_cast<double>(residue_total[static_cast<std::size_t>(r)]);
  return acc;
}

// Same sum at many cut points Y in one sweep over the table: O(X + q |Ys|).
// Ys must be increasing.
inline std::vector<std::complex<double>> twisted_partial_sums(const DivisorTable& t, i64 q,
                                                              i64 a, const std::vector<i64>& Ys) {
  if (q < 1) throw std::invalid_argument("twisted_partial_sums: q must be >= 1");
  if (std::gcd(((a % q) + q) % q, q) != 1 && q > 1)
    throw std::invalid_argument("twisted_partial_sums: a/q must be reduced");
  for (std::size_t i = 0; i < Ys.size(); ++i) {
    if (Ys[i] < 1 || Ys[i] > t.X) throw std::invalid_argument("twisted_partial_sums: Y out of range");
    if (i > 0 && Ys[i] <= Ys[i - 1])
      throw std::invalid_argument("twisted_partial_sums: Ys must be strictly increasing");
  }

  std::vector<std::complex<double>> root(static_cast<std::size_t>(q));
  for (i64 r = 0; r < q; ++r)
    root[static_cast<std::size_t>(r)] =
        detail::unit_phase(static_cast<long double>(a) * static_cast<long double>(r) /
                           static_cast<long double>(q));

  std::vector<u64> residue_total(static_cast<std::size_t>(q), 0);
  std::vector<std::complex<double>> out;
  out.reserve(Ys.size());
  std::size_t next = 0;
  for (i64 n = 1; n <= t.X && next < Ys.size(); ++n) {
    u64 sum;
    if (__builtin_add_overflow(residue_total[static_cast<std::size_t>(n % q)],
                               t.values[static_cast<std::size_t>(n)], &sum))
      throw value_overflow_error("twisted_partial_sums: residue subtotal overflow",
                                 static_cast<u64>(n));
    residue_total[static_cast<std::size_t>(n % q)] = sum;
    while (next < Ys.size() && Ys[next] == n) {
      std::complex<double> acc = 0.0;
      for (i64 r = 0; r < q; ++r)
        acc += root[static_cast<std::size_t>(r)] *
               static_cast<double>(residue_total[static_cast<std::size_t>(r)]);
      out.push_back(acc);
      ++next;
    }
  }
  return out;
}

}  // namespace circlelab
