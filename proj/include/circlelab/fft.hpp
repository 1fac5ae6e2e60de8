#pragma once

// In-place iterative radix-2 FFT.  Sizes are powers of two; twiddles are
// tabulated with one std::polar call per root, so accuracy is O(log n) ulps
// and the transform is deterministic.  sign = +1 computes
// X[j] = sum_n x[n] exp(+2 pi i jn / N), sign = -1 the conjugate transform
// (unnormalised).

#include <complex>
#include <numbers>
#include <vector>

#include "circlelab/errors.hpp"
#include "circlelab/numeric.hpp"

namespace circlelab {

inline void fft(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (!is_pow2(static_cast<i64>(n)))
    throw std::invalid_argument("fft: size must be a power of two");
  if (sign != 1 && sign != -1) throw std::invalid_argument("fft: sign must be +-1");
  if (n == 1) return;

  // Bit reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Tabulated roots of unity: roots[k] = exp(sign * 2 pi i k / n).
  std::vector<std::complex<double>> roots(n / 2);
  const double step = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    roots[k] = std::polar(1.0, step * static_cast<double>(k));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * roots[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace circlelab
