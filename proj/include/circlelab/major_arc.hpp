#pragma once

// Major arc main terms.
//
// At a reduced rational a/q the weighted sum grows like
//
//     sum_{n <= X} tau_k(n) e(a n / q) = X P_{k,q}(log X) + (power-saving error),
//
// with P_{k,q} a degree k-1 polynomial whose leading coefficient alpha_0(q)
// is 1/(k-1)! times a multiplicative local factor (alpha_0(1) = 1/(k-1)!,
// and alpha_0(q) = 1/q for k = 2).  The polynomials are recovered here by
// least squares against exact twisted partial sums at several cut points;
// everything downstream (singular series, main term prediction) consumes the
// fitted coefficients.
//
// The fitted polynomial feeds the s-th moment main term
//
//     integral_M |M|^s ~ X^{s-1} (log X)^{s(k-1)} * sum_l gamma_l (log X)^{-l},
//
// where gamma_l collects A_s, the totients, and the expansion coefficients of
// (P_{k,q}(log X) / (alpha_0(q) (log X)^{k-1}))^s in powers of 1/log X.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "circlelab/dissection.hpp"
#include "circlelab/divisor_sieve.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/kernel_moments.hpp"
#include "circlelab/numeric.hpp"

namespace circlelab {

struct LogPolynomial {
  int k = 0;
  i64 q = 1;
  i64 a = 0;
  std::vector<double> coeffs;  // leading first: coeffs[0] multiplies (log X)^{k-1}
  double fit_residual = 0.0;   // rms residual relative to the largest sample
  double im_rms = 0.0;         // rms of Im(S)/X over the fit points (diagnostic)
  double cond = 0.0;           // R-diagonal condition estimate of the fit
};

inline double eval_log_polynomial(const LogPolynomial& p, double logX) {
  double v = 0.0;
  for (double c : p.coeffs) v = v * logX + c;
  return v;
}

// Geometric ladder of cut points ending at xmax, spanning a factor `span`.
inline std::vector<i64> default_fit_points(i64 xmax, int n = 12, double span = 100.0) {
  if (xmax < 16) throw std::invalid_argument("default_fit_points: xmax too small");
  if (n < 2) throw std::invalid_argument("default_fit_points: need n >= 2");
  std::vector<i64> xs;
  for (int i = 0; i < n; ++i) {
    const double f = std::pow(span, static_cast<double>(i) / (n - 1) - 1.0);
    i64 x = static_cast<i64>(std::llround(static_cast<double>(xmax) * f));
    x = std::max<i64>(x, 2);
    if (xs.empty() || x > xs.back()) xs.push_back(x);
  }
  if (xs.size() < 2) throw std::invalid_argument("default_fit_points: degenerate ladder");
  return xs;
}

// Least squares fit of Re(S(Y))/Y against the basis (log Y)^{k-1}, ..., 1 at
// the cut points Ys.  Needs at least k+2 points so the residual actually
// measures misfit.  Ill conditioning (clustered cut points) throws rather
// than returning garbage coefficients.
inline LogPolynomial fit_log_polynomial(const DivisorTable& t, i64 q, i64 a,
                                        const std::vector<i64>& Ys) {
  const int k = t.k;
  if (static_cast<int>(Ys.size()) < k + 2)
    throw std::invalid_argument("fit_log_polynomial: need at least k+2 cut points");
  for (std::size_t i = 0; i < Ys.size(); ++i) {
    if (Ys[i] < 2 || Ys[i] > t.X)
      throw std::invalid_argument("fit_log_polynomial: cut point out of range");
    if (i > 0 && Ys[i] <= Ys[i - 1])
      throw std::invalid_argument("fit_log_polynomial: cut points must increase");
  }
  if (q < 1) throw std::invalid_argument("fit_log_polynomial: q must be >= 1");
  if (std::gcd(((a % q) + q) % q, q) != 1 && q > 1)
    throw std::invalid_argument("fit_log_polynomial: a/q must be reduced");

  const std::vector<std::complex<double>> sums = twisted_partial_sums(t, q, a, Ys);
  const std::size_t m = Ys.size();
  const std::size_t n = static_cast<std::size_t>(k);
  std::vector<double> A(m * n);
  std::vector<double> y(m);
  std::vector<double> im(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double Y = static_cast<double>(Ys[i]);
    const double L = std::log(Y);
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      A[i * n + (n - 1 - j)] = p;  // column n-1 is the constant term
      p *= L;
    }
    y[i] = sums[i].real() / Y;
    im[i] = sums[i].imag() / Y;
  }

  LeastSquaresResult ls = least_squares(std::move(A), y, m, n);

  LogPolynomial poly;
  poly.k = k;
  poly.q = q;
  poly.a = a;
  poly.coeffs = std::move(ls.coeffs);
  poly.cond = ls.cond;
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::fabs(v));
  double rss = 0.0, iss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    rss += ls.residuals[i] * ls.residuals[i];
    iss += im[i] * im[i];
  }
  poly.fit_residual = std::sqrt(rss / static_cast<double>(m)) / std::max(ymax, 1e-300);
  poly.im_rms = std::sqrt(iss / static_cast<double>(m));
  return poly;
}

// ---------------------------------------------------------------------------
// twisted main term spot check (report only)

struct TwistedMainTermReport {
  i64 q = 1;
  i64 a = 0;
  double beta = 0.0;
  std::complex<double> exact;   // sum tau_k(n) e(n (a/q + beta)) at Y = X
  std::complex<double> model;   // X Q_{k,q}(log X) scaled kernel profile
  double diff = 0.0;            // |exact - model|
  double error_scale = 0.0;     // q^{1/2 + k/(k+1)} X^{(k-1)/(k+1)} (qX)^eps
  double ratio = 0.0;           // diff / error_scale, expected O(1) up to logs
};

// Compares the exact twisted sum at a/q + beta against the fitted main term
// profile Q_{k,q}(log X) v(beta).  Report only: the ratio column is the
// observable that should stay bounded as X grows.
inline TwistedMainTermReport verify_twisted_main_term(const DivisorTable& t,
                                                      const LogPolynomial& poly,
                                                      double beta, double eps = 0.05) {
  if (poly.k != t.k) throw std::invalid_argument("verify_twisted_main_term: k mismatch");
  const double X = static_cast<double>(t.X);
  TwistedMainTermReport rep;
  rep.q = poly.q;
  rep.a = poly.a;
  rep.beta = beta;
  const double alpha = static_cast<double>(poly.a) / static_cast<double>(poly.q) + beta;
  rep.exact = eval_expsum_direct(t, alpha);
  const KernelValue kv = dirichlet_kernel(t.X, beta);
  rep.model = eval_log_polynomial(poly, std::log(X)) * kv.value;
  rep.diff = std::abs(rep.exact - rep.model);
  const double qd = static_cast<double>(poly.q);
  rep.error_scale = std::pow(qd, 0.5 + static_cast<double>(t.k) / (t.k + 1.0)) *
                    std::pow(X, (t.k - 1.0) / (t.k + 1.0)) * std::pow(qd * X, eps);
  rep.ratio = rep.diff / rep.error_scale;
  return rep;
}

// ---------------------------------------------------------------------------
// singular series

// Expansion of (P(log X) / (alpha_0 (log X)^{k-1}))^s as a series
// sum_m c_m (log X)^{-m}, c_0 = 1, via the power-series power rule
// (Miller recurrence): with u(z) = sum_{j>=1} a_j z^j, f = (1+u)^s satisfies
// (1+u) f' = s u' f, i.e. m c_m = sum_j ((s+1) j - m) a_j c_{m-j}.
inline std::vector<double> expand_moment_power(const LogPolynomial& poly, double s, int L) {
  if (L < 0) throw std::invalid_argument("expand_moment_power: L must be >= 0");
  if (poly.coeffs.empty() || !(poly.coeffs[0] > 0.0))
    throw std::domain_error("expand_moment_power: leading coefficient must be positive");
  const int deg = static_cast<int>(poly.coeffs.size()) - 1;
  std::vector<double> c(static_cast<std::size_t>(L) + 1, 0.0);
  c[0] = 1.0;
  for (int m = 1; m <= L; ++m) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(deg, m); ++j) {
      const double aj = poly.coeffs[static_cast<std::size_t>(j)] / poly.coeffs[0];
      acc += ((s + 1.0) * j - m) * aj * c[static_cast<std::size_t>(m - j)];
    }
    c[static_cast<std::size_t>(m)] = acc / m;
  }
  return c;
}

struct GammaSeries {
  double s = 0.0;
  int k = 0;
  int L = 0;
  std::vector<double> gamma;  // gamma[l], l = 0..L
  i64 P_trunc = 0;
  double tail_estimate = 0.0;  // heuristic size of the q > P_trunc remainder of gamma_0
};

// gamma_l = A_s sum_{q <= P_trunc} phi(q) alpha_0(q)^s c_l(q), built from the
// fitted polynomials for q = 1..P_trunc.  The tail estimate extrapolates the
// last term as C q^{1-s} (the k = 2 rate; heuristic for larger k).
inline GammaSeries singular_series(double s, int k, i64 P_trunc,
                                   const std::vector<LogPolynomial>& fits, int L = 0,
                                   double as_tol = 1e-8) {
  if (!(s > 2.0)) throw std::domain_error("singular_series: s must be > 2");
  if (P_trunc < 1) throw std::invalid_argument("singular_series: P_trunc must be >= 1");
  if (static_cast<i64>(fits.size()) < P_trunc)
    throw std::invalid_argument("singular_series: need fits for every q <= P_trunc");
  for (i64 q = 1; q <= P_trunc; ++q) {
    const LogPolynomial& f = fits[static_cast<std::size_t>(q - 1)];
    if (f.q != q || f.k != k)
      throw std::invalid_argument("singular_series: fits must be indexed by q with matching k");
  }

  const double As = compute_As(s, as_tol).value;
  const std::vector<i64> phi = phi_table(P_trunc);

  GammaSeries g;
  g.s = s;
  g.k = k;
  g.L = L;
  g.P_trunc = P_trunc;
  g.gamma.assign(static_cast<std::size_t>(L) + 1, 0.0);
  double last_term0 = 0.0;
  for (i64 q = 1; q <= P_trunc; ++q) {
    const LogPolynomial& f = fits[static_cast<std::size_t>(q - 1)];
    if (f.coeffs.empty() || !(f.coeffs[0] > 0.0))
      throw std::domain_error("singular_series: fitted leading coefficient must be positive");
    const double local = static_cast<double>(phi[static_cast<std::size_t>(q)]) *
                         std::pow(f.coeffs[0], s);
    const std::vector<double> c = expand_moment_power(f, s, L);
    for (int l = 0; l <= L; ++l) g.gamma[static_cast<std::size_t>(l)] += local * c[static_cast<std::size_t>(l)];
    if (q == P_trunc) last_term0 = local;
  }
  for (int l = 0; l <= L; ++l) g.gamma[static_cast<std::size_t>(l)] *= As;
  g.tail_estimate = As * last_term0 * static_cast<double>(P_trunc) / (s - 2.0);

  if (!(g.gamma[0] > 0.0))
    throw invariant_violation("singular_series: gamma_0 must be positive");
  return g;
}

struct MainTermPrediction {
  double s = 0.0;
  int k = 0;
  double X = 0.0;
  int L = 0;
  double value = 0.0;
};

// X^{s-1} (log X)^{s(k-1)} sum_{l <= L} gamma_l (log X)^{-l}.
inline MainTermPrediction predict_main_term(const GammaSeries& g, double X, int L = 0) {
  if (!(X >= 3.0)) throw std::invalid_argument("predict_main_term: X must be >= 3");
  if (L < 0 || L > g.L) throw std::invalid_argument("predict_main_term: L exceeds series order");
  const double logX = std::log(X);
  double series = 0.0;
  for (int l = L; l >= 0; --l)
    series = series / logX + g.gamma[static_cast<std::size_t>(l)];
  MainTermPrediction p;
  p.s = g.s;
  p.k = g.k;
  p.X = X;
  p.L = L;
  p.value = std::pow(X, g.s - 1.0) * std::pow(logX, g.s * (g.k - 1)) * series;
  return p;
}

}  // namespace circlelab
