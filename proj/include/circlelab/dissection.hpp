#pragma once

// Major/minor dissection of the unit circle.
//
// For a moment exponent s > 2 and convolution depth k the dissection scale is
//
//     delta = 2 (s - 2) / ((s + 7)(k + 1) + 2),      eta = 2 delta / (s - 2),
//
// and P = X^eta.  The major arcs are the closed intervals of halfwidth P/X
// around the reduced fractions a/q with q <= P; everything else is minor.
// The exponent identity
//
//     2/(k+1) - (9/2 + 1/(k+1)) eta = eta (s - 2) / 2  ( = delta )
//
// ties the dissection scale to the bilinear estimates used on the minor arcs
// and is asserted at parameter construction.
//
// Rational approximation is by continued fraction convergents.  The last
// convergent a/q with q <= Q obeys |alpha - a/q| < 1/(q (Q+1)), which is the
// Dirichlet box bound; with Q = floor(X/P) every point of the circle is
// within P/(qX) of such a fraction, so a point is major exactly when one of
// its convergents with q <= P lands within the arc halfwidth (a fraction that
// close at that scale is necessarily a convergent, since 2 P^3 < X).

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "circlelab/divisor_sieve.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/numeric.hpp"
#include "circlelab/quadrature.hpp"

namespace circlelab {

struct ArcParams {
  double s = 0.0;
  int k = 0;
  double X = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double P = 0.0;
};

inline ArcParams compute_params(double s, int k, double X) {
  if (!(s > 2.0)) throw std::domain_error("compute_params: s must be > 2");
  if (k < 2) throw std::domain_error("compute_params: k must be >= 2");
  if (!(X >= 2.0)) throw std::domain_error("compute_params: X must be >= 2");

  ArcParams p;
  p.s = s;
  p.k = k;
  p.X = X;
  const double D = (s + 7.0) * (k + 1.0) + 2.0;
  p.delta = 2.0 * (s - 2.0) / D;
  p.eta = 2.0 * p.delta / (s - 2.0);
  p.P = std::pow(X, p.eta);

  const double lhs = 2.0 / (k + 1.0) - (4.5 + 1.0 / (k + 1.0)) * p.eta;
  const double rhs = p.eta * (s - 2.0) / 2.0;
  if (std::fabs(lhs - rhs) > 1e-12)
    throw invariant_violation("compute_params: exponent identity failed");
  if (!(p.eta <= 0.4))
    throw invariant_violation("compute_params: eta exceeded 2/5");
  return p;
}

// ---------------------------------------------------------------------------
// continued fractions

struct RationalApprox {
  i64 a = 0;
  i64 q = 1;
  double err = 0.0;  // |alpha - a/q|
};

// All continued fraction convergents a/q of alpha with q <= Q, in increasing
// order of q.  Convergents are automatically reduced.  The walk stops when
// the next denominator would pass Q, when the remainder is (numerically)
// exhausted, or when integits would overflow.
inline std::vector<RationalApprox> convergents(double alpha, i64 Q) {
  if (Q < 1) throw std::invalid_argument("convergents: Q must be >= 1");
  if (!std::isfinite(alpha)) throw std::domain_error("convergents: alpha must be finite");

  std::vector<RationalApprox> out;
  i64 h1 = 1, h2 = 0;  // numerators  h_{n-1}, h_{n-2}
  i64 k1 = 0, k2 = 1;  // denominators
  long double y = static_cast<long double>(alpha);
  for (int iter = 0; iter < 64; ++iter) {
    const long double fl = std::floor(y);
    if (fl > 4.0e18L || fl < -4.0e18L) break;
    const i64 an = static_cast<i64>(fl);
    const __int128 h = static_cast<__int128>(an) * h1 + h2;
    const __int128 k = static_cast<__int128>(an) * k1 + k2;
    if (k > Q || h > (static_cast<__int128>(1) << 62) || h < -(static_cast<__int128>(1) << 62))
      break;
    RationalApprox r;
    r.a = static_cast<i64>(h);
    r.q = static_cast<i64>(k);
    r.err = static_cast<double>(std::fabs(static_cast<long double>(alpha) -
                                          static_cast<long double>(r.a) / static_cast<long double>(r.q)));
    out.push_back(r);
    const long double rem = y - fl;
    if (rem < 1e-18L) break;  // alpha is exactly rational at this precision
    y = 1.0L / rem;
    h2 = h1; h1 = r.a;
    k2 = k1; k1 = r.q;
  }
  return out;
}

// Best rational approximation with denominator at most Q, in the sense of
// minimising ||q alpha||: the last convergent with q <= Q.  Guarantees
// err <= 1 / (q (Q+1)) because the next convergent denominator exceeds Q.
inline RationalApprox best_rational(double alpha, i64 Q) {
  const std::vector<RationalApprox> cs = convergents(alpha, Q);
  if (cs.empty()) throw invariant_violation("best_rational: no convergent found");
  return cs.back();
}

// ---------------------------------------------------------------------------
// arc enumeration

struct MajorArc {
  i64 q = 1;
  i64 a = 0;          // reduced, 0 <= a < q; the q = 1 arc is centred at 0
  double center = 0;  // a/q
  double halfwidth = 0;
};

struct MajorArcSystem {
  ArcParams params;
  double halfwidth = 0.0;  // P / X, shared by all arcs
  std::vector<MajorArc> arcs;

  double total_measure() const { return 2.0 * halfwidth * static_cast<double>(arcs.size()); }
};

// All arcs for q <= floor(P), centres in Farey order starting at 0/1.  The
// arc count is checked against sum of phi(q) and pairwise disjointness (with
// wraparound) is checked on neighbouring centres; violations throw rather
// than clip, since overlapping arcs would double-count moment mass.
inline MajorArcSystem enumerate_major_arcs(const ArcParams& params) {
  if (!(params.P >= 1.0) || !(params.X > params.P))
    throw std::domain_error("enumerate_major_arcs: need 1 <= P < X");
  MajorArcSystem sys;
  sys.params = params;
  sys.halfwidth = params.P / params.X;

  const i64 n = static_cast<i64>(std::floor(params.P));
  // Farey walk over fractions 0/1, ..., ascending; 1/1 duplicates 0/1.
  i64 a = 0, b = 1, c = 1, d = n;
  sys.arcs.push_back({1, 0, 0.0, sys.halfwidth});
  while (c <= n) {
    const i64 step = (n + b) / d;
    const i64 a2 = step * c - a;
    const i64 b2 = step * d - b;
    a = c; b = d; c = a2; d = b2;
    if (a == 1 && b == 1) break;
    sys.arcs.push_back({b, a, static_cast<double>(a) / static_cast<double>(b), sys.halfwidth});
  }

  const std::vector<i64> phi = phi_table(std::max<i64>(n, 1));
  i64 expected = 0;
  for (i64 q = 1; q <= n; ++q) expected += phi[static_cast<std::size_t>(q)];
  if (static_cast<i64>(sys.arcs.size()) != expected)
    throw invariant_violation("enumerate_major_arcs: arc count disagrees with totient sum");

  for (std::size_t i = 0; i + 1 < sys.arcs.size(); ++i) {
    const double gap = sys.arcs[i + 1].center - sys.arcs[i].center;
    if (gap + 1e-15 < 2.0 * sys.halfwidth) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "enumerate_major_arcs: arcs %lld/%lld and %lld/%lld overlap (gap %.3e < 2*%.3e)",
                    static_cast<long long>(sys.arcs[i].a), static_cast<long long>(sys.arcs[i].q),
                    static_cast<long long>(sys.arcs[i + 1].a), static_cast<long long>(sys.arcs[i + 1].q),
                    gap, sys.halfwidth);
      throw invariant_violation(msg);
    }
  }
  if (sys.arcs.size() > 1) {
    const double wrap = 1.0 - sys.arcs.back().center;  // distance to the arc at 0/1
    if (wrap + 1e-15 < 2.0 * sys.halfwidth)
      throw invariant_violation("enumerate_major_arcs: wraparound overlap at 0/1");
  } else if (2.0 * sys.halfwidth >= 1.0 - 1e-15) {
    throw invariant_violation("enumerate_major_arcs: single arc covers the whole circle");
  }
  return sys;
}

// ---------------------------------------------------------------------------
// point classification

struct AlphaClass {
  Region region = Region::Minor;  // Major or Minor
  i64 q = 1;  // Major: arc label. Minor: Dirichlet denominator, P < q <= X/P.
  i64 a = 0;
  double err = 0.0;  // distance |alpha - a/q| (wrapped for the arc at 0)
};

// Classify one point of [0,1).  Walks the convergents with denominator at
// most Q = floor(X/P): a convergent with q <= P inside the halfwidth selects
// its (closed) major arc, otherwise the deepest convergent is the minor-arc
// Dirichlet pair, and the box bound forces its denominator past P.
inline AlphaClass classify_alpha(double alpha, const MajorArcSystem& sys) {
  const double X = sys.params.X;
  const double P = sys.params.P;
  if (!(P >= 1.0) || !(P < X)) throw std::domain_error("classify_alpha: inconsistent dissection");
  if (!std::isfinite(alpha)) throw std::domain_error("classify_alpha: alpha must be finite");
  const double x = frac(alpha);

  const i64 Q = static_cast<i64>(std::floor(X / P));
  const i64 qmax = static_cast<i64>(std::floor(P));
  const std::vector<RationalApprox> cs = convergents(x, Q);
  if (cs.empty()) throw invariant_violation("classify_alpha: no convergent found");

  for (const RationalApprox& c : cs) {
    if (c.q <= qmax && c.err <= sys.halfwidth) {
      AlphaClass out;
      out.region = Region::Major;
      out.q = c.q;
      out.a = ((c.a % c.q) + c.q) % c.q;  // 1/1 labels the arc at 0/1
      out.err = c.err;
      return out;
    }
  }
  AlphaClass out;
  out.region = Region::Minor;
  out.q = cs.back().q;
  out.a = cs.back().a;
  out.err = cs.back().err;
  if (out.q <= qmax)
    throw invariant_violation("classify_alpha: minor point with denominator below P");
  return out;
}

}  // namespace circlelab
