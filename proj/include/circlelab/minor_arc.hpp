#pragma once

// Minor arc machinery: the pointwise bound profile, a randomized supremum
// scan over the minor region, the type I / type II bilinear majorants that
// drive the pointwise bound, and the Holder bridge from the supremum and the
// L^2 mass to the s-th minor arc moment.
//
// The pointwise profile for a point alpha with Dirichlet pair (a, q),
// P < q <= X/P, is
//
//     minor_bound(q, X, C) = (sqrt(qX) + X/sqrt(q) + X^{4/5}) (log X)^C,
//
// minimised near q ~ sqrt X where it is ~ 2 X^{3/4} (log X)^C.  Combined over
// the admissible q range it gives sup_minor |M| << X^{1 - eta/2} (log X)^{O(1)}.
// Holder then bounds the minor moment by sup^{s-2} times the full L^2 mass.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "circlelab/dissection.hpp"
#include "circlelab/divisor_sieve.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/moment_engine.hpp"
#include "circlelab/numeric.hpp"

namespace circlelab {

inline double minor_bound(i64 q, double X, double C) {
  if (q < 1) throw std::invalid_argument("minor_bound: q must be >= 1");
  if (!(X >= 2.0)) throw std::invalid_argument("minor_bound: X must be >= 2");
  const double qd = static_cast<double>(q);
  const double profile = std::sqrt(qd * X) + X / std::sqrt(qd) + std::pow(X, 0.8);
  return profile * std::pow(std::log(X), C);
}

// ---------------------------------------------------------------------------
// supremum scan

struct MinorScanRecord {
  double alpha = 0.0;
  i64 q = 1;        // Dirichlet denominator of the sample, P < q <= X/P
  double absM = 0.0;
  double bound = 0.0;  // minor_bound(q, X, C)
  double ratio = 0.0;  // absM / bound
};

struct MinorScanResult {
  i64 n_samples = 0;
  u64 seed = 0;
  double C = 0.0;
  double sup_model = 0.0;  // X^{1 - eta/2} (log X)^C
  double max_ratio = 0.0;
  double max_absM = 0.0;
  i64 rejected = 0;  // candidate points that landed in the major region
  std::vector<MinorScanRecord> records;
};

// Samples the minor region with a golden-ratio low-discrepancy walk plus two
// adversarial streams: exact and near-miss rationals a/q with q just above P
// (the largest minor-region peaks, hence where the supremum actually sits),
// and offset probes with q near sqrt X, where the bound profile bottoms out.
// Candidates classified major are rejected (counted, never recorded), so
// every record is a certified minor point with its Dirichlet pair.  Fully
// deterministic for a fixed seed.
inline MinorScanResult minor_arc_sup_scan(const DivisorTable& t, const MajorArcSystem& sys,
                                          i64 n_samples, double C, u64 seed) {
  if (n_samples < 1) throw std::invalid_argument("minor_arc_sup_scan: need n_samples >= 1");
  const double X = sys.params.X;
  const double P = sys.params.P;
  if (static_cast<double>(t.X) != X)
    throw std::invalid_argument("minor_arc_sup_scan: table and dissection disagree on X");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double golden = 0.6180339887498949;
  const double u0 = unif(rng);

  const i64 root = isqrt(static_cast<i64>(X));
  const i64 Q = static_cast<i64>(std::floor(X / P));
  const i64 q_lo = std::min(Q, std::max(static_cast<i64>(std::floor(P)) + 1, root / 2));
  const i64 q_hi = std::max(q_lo, std::min(Q, 2 * root));
  std::uniform_int_distribution<i64> qdist(q_lo, q_hi);

  const i64 sq_lo = std::min(Q, static_cast<i64>(std::floor(P)) + 1);
  const i64 sq_hi = std::max(sq_lo, std::min(Q, 4 * sq_lo));
  std::uniform_int_distribution<i64> sqdist(sq_lo, sq_hi);

  MinorScanResult res;
  res.n_samples = n_samples;
  res.seed = seed;
  res.C = C;
  res.sup_model = std::pow(X, 1.0 - sys.params.eta / 2.0) * std::pow(std::log(X), C);
  res.records.reserve(static_cast<std::size_t>(n_samples));

  i64 step = 0;
  while (static_cast<i64>(res.records.size()) < n_samples) {
    double alpha;
    const std::size_t slot = res.records.size() % 8;
    if (slot == 3 || slot == 7) {
      // adversarial: slot 3 targets the just-excluded small-q rational peaks
      // (exactly or at a near-miss offset), slot 7 probes near q ~ sqrt X
      const bool small_pool = slot == 3;
      const i64 q = small_pool ? sqdist(rng) : qdist(rng);
      std::uniform_int_distribution<i64> adist(1, std::max<i64>(1, q - 1));
      i64 a = adist(rng);
      for (int tries = 0; std::gcd(a, q) != 1 && tries < 64; ++tries) a = adist(rng);
      if (std::gcd(a, q) != 1) a = 1;
      const bool exact = small_pool && unif(rng) < 0.5;
      const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
      const double offset =
          exact ? 0.0 : (1.01 + 2.0 * unif(rng)) * sys.halfwidth;
      alpha = frac(static_cast<double>(a) / static_cast<double>(q) + sign * offset);
    } else {
      alpha = frac(u0 + static_cast<double>(++step) * golden);
    }
    const AlphaClass cls = classify_alpha(alpha, sys);
    if (cls.region == Region::Major) {
      ++res.rejected;
      continue;
    }
    MinorScanRecord rec;
    rec.alpha = alpha;
    rec.q = cls.q;
    rec.absM = std::abs(eval_expsum_direct(t, alpha));
    rec.bound = minor_bound(cls.q, X, C);
    rec.ratio = rec.absM / rec.bound;
    res.max_ratio = std::max(res.max_ratio, rec.ratio);
    res.max_absM = std::max(res.max_absM, rec.absM);
    res.records.push_back(rec);
  }
  return res;
}

// ---------------------------------------------------------------------------
// bilinear majorants

// sum_{m <= M} min(N, 1 / (2 ||alpha m||)): the lattice point count that
// controls type I sums sum_m a_m sum_{n <= N} e(alpha m n).
inline double type_I_quantity(double alpha, i64 M, i64 N) {
  if (M < 1 || N < 1) throw std::invalid_argument("type_I_quantity: M, N must be >= 1");
  std::vector<double> parts(static_cast<std::size_t>(M));
  for (i64 m = 1; m <= M; ++m) {
    const double d = dist_to_nearest_int(alpha * static_cast<double>(m));
    const double cap = static_cast<double>(N);
    parts[static_cast<std::size_t>(m - 1)] = d > 0.0 ? std::min(cap, 1.0 / (2.0 * d)) : cap;
  }
  return pairwise_sum(parts);
}

struct CoeffBlock {
  i64 start = 1;           // first index of the block
  std::vector<double> v;   // coefficients on start, start+1, ...
};

struct TypeIIReport {
  std::complex<double> exact;  // sum_{m,n} a_m b_n e(alpha m n)
  double majorant = 0.0;       // Cauchy-Schwarz bound via the difference kernel
  double ratio = 0.0;          // |exact| / majorant
};

// Checks the bilinear Cauchy-Schwarz inequality on one pair of coefficient
// blocks:
//   |sum_{m,n} a_m b_n e(alpha m n)|^2
//     <= ||a||_2^2 sum_{n1,n2} |b_{n1} b_{n2}| min(A, 1/(2||alpha(n1-n2)||)),
// with A the m-block length.  Budgeted at 10^8 cell operations.
inline TypeIIReport type_II_check(const CoeffBlock& a, const CoeffBlock& b, double alpha) {
  const i64 A = static_cast<i64>(a.v.size());
  const i64 B = static_cast<i64>(b.v.size());
  if (A < 1 || B < 1) throw std::invalid_argument("type_II_check: empty block");
  if (A * B > 100000000)
    throw capacity_error("type_II_check: block product exceeds 1e8 cells");

  TypeIIReport rep;
  std::complex<double> acc = 0.0;
  for (i64 i = 0; i < A; ++i) {
    const i64 m = a.start + i;
    if (a.v[static_cast<std::size_t>(i)] == 0.0) continue;
    // inner geometric recurrence over n with a long double anchor
    const std::complex<double> w =
        detail::unit_phase(static_cast<long double>(alpha) * static_cast<long double>(m));
    std::complex<double> z =
        detail::unit_phase(static_cast<long double>(alpha) * static_cast<long double>(m) *
                           static_cast<long double>(b.start));
    std::complex<double> inner = 0.0;
    for (i64 j = 0; j < B; ++j) {
      inner += b.v[static_cast<std::size_t>(j)] * z;
      z *= w;
    }
    acc += a.v[static_cast<std::size_t>(i)] * inner;
  }
  rep.exact = acc;

  double a2 = 0.0;
  for (double x : a.v) a2 += x * x;
  // difference kernel: sum over d = n1 - n2 of |b| autocorrelation
  std::vector<double> absb(b.v.size());
  for (std::size_t j = 0; j < b.v.size(); ++j) absb[j] = std::fabs(b.v[j]);
  double quad = 0.0;
  for (i64 d = -(B - 1); d <= B - 1; ++d) {
    double corr = 0.0;
    for (i64 j = std::max<i64>(0, d); j < std::min(B, B + d); ++j)
      corr += absb[static_cast<std::size_t>(j)] * absb[static_cast<std::size_t>(j - d)];
    const double dist = dist_to_nearest_int(alpha * static_cast<double>(d));
    const double kern = dist > 0.0 ? std::min(static_cast<double>(A), 1.0 / (2.0 * dist))
                                   : static_cast<double>(A);
    quad += corr * kern;
  }
  rep.majorant = std::sqrt(a2) * std::sqrt(quad);
  rep.ratio = rep.majorant > 0.0 ? std::abs(rep.exact) / rep.majorant : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Holder bridge

struct HolderReport {
  double s = 0.0;
  double lhs = 0.0;        // measured integral_minor |M|^s
  double sup_used = 0.0;   // slack * observed sup_minor |M|
  double l2 = 0.0;         // sum tau_k(n)^2 = integral_0^1 |M|^2
  double rhs = 0.0;        // sup_used^{s-2} * l2
  double slack = 0.0;
  bool passed = false;
};

// integral_minor |M|^s <= (sup_minor |M|)^{s-2} integral |M|^2.  The observed
// scan supremum is inflated by `slack` to cover points the scan missed.
inline HolderReport holder_minor_check(const DivisorTable& t, const MajorArcSystem& sys,
                                       double s, const MinorScanResult& scan, double l2,
                                       double slack = 1.2, QuadConfig cfg = {}) {
  if (!(s > 2.0)) throw std::domain_error("holder_minor_check: s must be > 2");
  if (!(l2 > 0.0)) throw std::invalid_argument("holder_minor_check: l2 must be positive");
  HolderReport rep;
  rep.s = s;
  rep.slack = slack;
  rep.l2 = l2;
  rep.sup_used = slack * scan.max_absM;
  rep.lhs = region_moment(t, s, sys, Region::Minor, cfg).value;
  rep.rhs = std::pow(rep.sup_used, s - 2.0) * l2;
  rep.passed = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace circlelab
