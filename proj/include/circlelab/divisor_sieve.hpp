#pragma once

// Exact tables of the k-fold divisor function and the dyadic decomposition
// of its support into convolution pieces.
//
// tau_k(n) counts ordered k-tuples (d_1,...,d_k) of positive integers with
// d_1 * ... * d_k = n, so tau_1 = 1 identically and tau_2 is the classical
// divisor count.  Tables hold tau_k(n) for 1 <= n <= X as exact 64-bit
// integers and are built by k-1 Dirichlet convolutions against the all-ones
// table, total work O(k X log X).  Any entry that would leave the uint64
// range aborts the build with the offending index; no wrapped value is ever
// stored.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "circlelab/errors.hpp"
#include "circlelab/numeric.hpp"

namespace circlelab {

// Entry budget for one table; 2^24 entries = 128 MiB of uint64.
inline constexpr i64 kDefaultTableCapacity = i64(1) << 24;

// values[n] for 1 <= n <= X; values[0] is unused and kept zero.
using ValueTable = std::vector<u64>;

inline ValueTable ones_table(i64 X) {
  ValueTable t(static_cast<std::size_t>(X) + 1, 1);
  t[0] = 0;
  return t;
}

// (f * g)[n] = sum_{ab = n} f(a) g(b), computed by walking multiples of each
// a <= X.  Throws value_overflow_error at the first n whose entry overflows.
inline ValueTable dirichlet_convolve(const ValueTable& f, const ValueTable& g) {
  if (f.size() != g.size() || f.size() < 2)
    throw std::invalid_argument("dirichlet_convolve: tables must share a size X+1 >= 2");
  const i64 X = static_cast<i64>(f.size()) - 1;
  ValueTable out(f.size(), 0);
  for (i64 a = 1; a <= X; ++a) {
    const u64 fa = f[static_cast<std::size_t>(a)];
    if (fa == 0) continue;
    for (i64 b = 1; a * b <= X; ++b) {
      const u64 gb = g[static_cast<std::size_t>(b)];
      if (gb == 0) continue;
      u64 prod, sum;
      if (__builtin_mul_overflow(fa, gb, &prod) ||
          __builtin_add_overflow(out[static_cast<std::size_t>(a * b)], prod, &sum))
        throw value_overflow_error("dirichlet_convolve: uint64 overflow",
                                   static_cast<u64>(a * b));
      out[static_cast<std::size_t>(a * b)] = sum;
    }
  }
  return out;
}

struct DivisorTable {
  int k = 0;
  i64 X = 0;
  ValueTable values;  // values[n] = tau_k(n), index 0 unused

  u64 at(i64 n) const {
    if (n < 1 || n > X) throw std::invalid_argument("DivisorTable::at: n out of range");
    return values[static_cast<std::size_t>(n)];
  }
};

inline DivisorTable build_divisor_table(int k, i64 X, i64 capacity = kDefaultTableCapacity) {
  if (k < 1) throw std::invalid_argument("build_divisor_table: k must be >= 1");
  if (X < 1) throw std::invalid_argument("build_divisor_table: X must be >= 1");
  if (X + 1 > capacity) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "build_divisor_table: X = %lld exceeds capacity of %lld entries",
                  static_cast<long long>(X), static_cast<long long>(capacity));
    throw capacity_error(msg);
  }
  DivisorTable t;
  t.k = k;
  t.X = X;
  t.values = ones_table(X);
  for (int i = 2; i <= k; ++i) t.values = dirichlet_convolve(t.values, ones_table(X));
  return t;
}

// Euler phi for 1 <= q <= Q by linear sieve.
inline std::vector<i64> phi_table(i64 Q) {
  if (Q < 1) throw std::invalid_argument("phi_table: Q must be >= 1");
  std::vector<i64> phi(static_cast<std::size_t>(Q) + 1, 0);
  std::vector<i64> primes;
  std::vector<bool> composite(static_cast<std::size_t>(Q) + 1, false);
  phi[1] = 1;
  for (i64 i = 2; i <= Q; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      primes.push_back(i);
      phi[static_cast<std::size_t>(i)] = i - 1;
    }
    for (i64 p : primes) {
      if (p * i > Q) break;
      composite[static_cast<std::size_t>(p * i)] = true;
      if (i % p == 0) {
        phi[static_cast<std::size_t>(p * i)] = phi[static_cast<std::size_t>(i)] * p;
        break;
      }
      phi[static_cast<std::size_t>(p * i)] = phi[static_cast<std::size_t>(i)] * (p - 1);
    }
  }
  return phi;
}

// ---------------------------------------------------------------------------
// dyadic decomposition
//
// Over the window (X, 2X] the identity tau_k = 1 * ... * 1 (k factors, each
// supported on [1, 2X]) is cut along a dyadic partition of [1, 2X]: intervals
// [N, 2N) for N = 1, 2, 4, ... plus one top interval ending at 2X.  A piece
// is an ordered choice of one interval per factor; pieces are canonicalised
// by sorting their intervals (convolution is commutative) and pruned when no
// product of elements can land in the window.

struct IndexInterval {
  i64 lo = 0;  // inclusive; lo is also the dyadic scale of the interval
  i64 hi = 0;  // inclusive; hi <= 2 * lo by construction
};

struct DyadicPiece {
  std::vector<IndexInterval> intervals;  // sorted by (lo, hi), size k
  i64 window_lo = 0;                     // X + 1
  i64 window_hi = 0;                     // 2X
};

enum class PieceTag { TypeI, TypeII };

// split is meaningful for TypeII only: the number of leading intervals whose
// scale product forms the "bilinear" prefix.
struct PieceClass {
  PieceTag tag = PieceTag::TypeI;
  int split = 0;
};

namespace detail {

// Product of a and b clamped to cap + 1; avoids overflow for piece pruning.
inline i64 mul_capped(i64 a, i64 b, i64 cap) {
  const __int128 p = static_cast<__int128>(a) * b;
  return p > cap ? cap + 1 : static_cast<i64>(p);
}

inline std::vector<IndexInterval> dyadic_intervals(i64 upto) {
  std::vector<IndexInterval> iv;
  i64 lo = 1;
  while (2 * lo <= upto) {
    iv.push_back({lo, 2 * lo - 1});
    lo *= 2;
  }
  iv.push_back({lo, upto});  // top interval [2^L, upto], possibly short
  return iv;
}

}  // namespace detail

// All contributing pieces for tau_k on (X, 2X], in a deterministic order.
// A piece contributes iff some product with factor j drawn from interval j
// lies in the window, i.e. prod(lo) <= 2X and prod(hi) > X.
inline std::vector<DyadicPiece> dyadic_decompose(int k, i64 X) {
  if (k < 1) throw std::invalid_argument("dyadic_decompose: k must be >= 1");
  if (X < 1) throw std::invalid_argument("dyadic_decompose: X must be >= 1");
  const i64 twoX = 2 * X;
  const std::vector<IndexInterval> iv = detail::dyadic_intervals(twoX);
  const int m = static_cast<int>(iv.size());

  std::vector<DyadicPiece> pieces;
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (;;) {
    i64 plo = 1, phi = 1;
    for (int j = 0; j < k; ++j) {
      plo = detail::mul_capped(plo, iv[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].lo, twoX);
      phi = detail::mul_capped(phi, iv[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].hi, twoX);
    }
    if (plo <= twoX && phi > X) {
      DyadicPiece p;
      p.window_lo = X + 1;
      p.window_hi = twoX;
      p.intervals.reserve(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j)
        p.intervals.push_back(iv[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]);
      std::sort(p.intervals.begin(), p.intervals.end(),
                [](const IndexInterval& a, const IndexInterval& b) {
                  return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
                });
      if (std::find_if(pieces.begin(), pieces.end(), [&](const DyadicPiece& q) {
            for (int j = 0; j < k; ++j)
              if (q.intervals[static_cast<std::size_t>(j)].lo != p.intervals[static_cast<std::size_t>(j)].lo ||
                  q.intervals[static_cast<std::size_t>(j)].hi != p.intervals[static_cast<std::size_t>(j)].hi)
                return false;
            return true;
          }) == pieces.end())
        pieces.push_back(std::move(p));
    }
    // Odometer over ordered index tuples; canonicalisation above removes the
    // order again, but enumerating ordered tuples keeps the loop trivial.
    int j = k - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == m - 1) {
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++idx[static_cast<std::size_t>(j)];
  }
  return pieces;
}

// Classify a piece by the scale products of its intervals.  Walking the
// sorted scales N_1 <= ... <= N_k, take the shortest prefix whose scale
// product exceeds X^{2/5}.  The piece is TypeII (bilinear) when that prefix
// and its complement both sit inside [X^{2/5} / 2^k, 2^k X^{3/5}], so both
// sides of the product are genuinely large; everything else, in particular
// any piece dominated by one long smooth factor, is TypeI.
inline PieceClass classify_piece(const DyadicPiece& p, i64 X) {
  if (p.intervals.empty()) throw std::invalid_argument("classify_piece: empty piece");
  if (X < 1) throw std::invalid_argument("classify_piece: X must be >= 1");
  const int k = static_cast<int>(p.intervals.size());
  const double x25 = std::pow(static_cast<double>(X), 0.4);
  const double x35 = std::pow(static_cast<double>(X), 0.6);
  const double fuzz = std::pow(2.0, k);

  double prefix = 1.0;
  int split = 0;
  for (int j = 0; j < k; ++j) {
    prefix *= static_cast<double>(p.intervals[static_cast<std::size_t>(j)].lo);
    if (prefix > x25) {
      split = j + 1;
      break;
    }
  }
  if (split == 0) return {PieceTag::TypeI, 0};  // total scale product is small

  double total = prefix;
  for (int j = split; j < k; ++j)
    total *= static_cast<double>(p.intervals[static_cast<std::size_t>(j)].lo);
  const double complement = total / prefix;

  const bool prefix_ok = prefix <= fuzz * x35;
  const bool complement_ok = complement >= x25 / fuzz && complement <= fuzz * x35;
  if (prefix_ok && complement_ok) return {PieceTag::TypeII, split};
  return {PieceTag::TypeI, 0};
}

// ---------------------------------------------------------------------------
// table cache (binary dump / load)
//
// Layout, little endian:
//   magic "CLDT" | u32 version | u32 k | u64 X | u32 value width in bytes (8)
//   followed by X raw uint64 values for n = 1..X.

namespace detail {

inline void put_u32(std::ofstream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ofstream& os, u64 v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u32(std::ifstream& is, std::uint32_t& v) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

inline bool get_u64(std::ifstream& is, u64& v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return true;
}

}  // namespace detail

inline constexpr std::uint32_t kTableCacheVersion = 1;

inline void dump_table(const DivisorTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("dump_table: cannot open " + path);
  os.write("CLDT", 4);
  detail::put_u32(os, kTableCacheVersion);
  detail::put_u32(os, static_cast<std::uint32_t>(t.k));
  detail::put_u64(os, static_cast<u64>(t.X));
  detail::put_u32(os, 8);
  for (i64 n = 1; n <= t.X; ++n) detail::put_u64(os, t.values[static_cast<std::size_t>(n)]);
  if (!os) throw std::runtime_error("dump_table: write failed for " + path);
}

inline DivisorTable load_table(const std::string& path, i64 capacity = kDefaultTableCapacity) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_table: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "CLDT")
    throw std::runtime_error("load_table: bad magic in " + path);
  std::uint32_t version = 0, k = 0, width = 0;
  u64 X = 0;
  if (!detail::get_u32(is, version) || !detail::get_u32(is, k) ||
      !detail::get_u64(is, X) || !detail::get_u32(is, width))
    throw std::runtime_error("load_table: truncated header in " + path);
  if (version != kTableCacheVersion)
    throw std::runtime_error("load_table: unsupported version in " + path);
  if (width != 8) throw std::runtime_error("load_table: unsupported value width in " + path);
  if (k < 1 || X < 1) throw std::runtime_error("load_table: corrupt header in " + path);
  if (static_cast<i64>(X) + 1 > capacity)
    throw capacity_error("load_table: cached table exceeds capacity");

  DivisorTable t;
  t.k = static_cast<int>(k);
  t.X = static_cast<i64>(X);
  t.values.assign(static_cast<std::size_t>(X) + 1, 0);
  for (u64 n = 1; n <= X; ++n)
    if (!detail::get_u64(is, t.values[static_cast<std::size_t>(n)]))
      throw std::runtime_error("load_table: truncated data in " + path);
  return t;
}

}  // namespace circlelab
