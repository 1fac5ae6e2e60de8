#include <cmath>
#include <vector>

#include "circlelab/circlelab.hpp"
#include "doctest.h"

using namespace circlelab;

namespace {

// Independent oracle for the fourth moment: the number of solutions of
// a + b = c + d with 1 <= a,b,c,d <= X, counted by additive representation.
u64 fourth_moment_count(i64 X) {
  u64 total = 0;
  for (i64 m = 2; m <= 2 * X; ++m) {
    const i64 lo = std::max<i64>(1, m - X);
    const i64 hi = std::min<i64>(X, m - 1);
    const u64 r = static_cast<u64>(hi - lo + 1);
    total += r * r;
  }
  return total;
}

}  // namespace

TEST_SUITE("kernel_moments") {
  TEST_CASE("moment constant anchors") {
    // the truncation point grows like tol^{1/(1-s)}, so s = 2 runs at 1e-6
    const AsValue a2 = compute_As(2.0, 1e-6);
    CHECK(std::fabs(a2.value - 1.0) <= 1e-6);
    const AsValue a4 = compute_As(4.0, 1e-8);
    CHECK(std::fabs(a4.value - 2.0 / 3.0) <= 1e-6);
    // reference for s = 3 from an independent adaptive quadrature
    const AsValue a3 = compute_As(3.0, 1e-8);
    CHECK(std::fabs(a3.value - 0.7693194775647) <= 1e-7);
    CHECK(a2.tail_bound <= 0.5e-6);
    CHECK(a2.tail_bound > 0.0);
  }

  TEST_CASE("moment constant is non-increasing in s") {
    double prev = 1e300;
    for (double s : {2.0, 2.5, 3.0, 4.0, 6.0}) {
      const double v = compute_As(s, s == 2.0 ? 1e-6 : 1e-8).value;
      CHECK(v > 0.0);
      CHECK(v <= prev + 1e-9);
      prev = v;
    }
  }

  TEST_CASE("moment constant domain errors") {
    CHECK_THROWS_AS(compute_As(1.5, 1e-8), std::domain_error);
    CHECK_THROWS_AS(compute_As(3.0, 2.0), std::domain_error);
  }

  TEST_CASE("second kernel moment is X") {
    for (i64 X : {i64(10), i64(100), i64(1000)}) {
      const MomentEstimate m = kernel_moment(X, 2.0);
      CHECK(m.value == doctest::Approx(static_cast<double>(X)).epsilon(1e-12));
      CHECK(m.s == 2.0);
      CHECK(m.grid_N >= 8 * X);
    }
  }

  TEST_CASE("fourth kernel moment closed form and oracle") {
    // closed form (2X^3 + X)/3 equals the additive-energy count
    for (i64 X : {i64(10), i64(64), i64(256)}) {
      const u64 count = fourth_moment_count(X);
      CHECK(count == static_cast<u64>((2 * X * X * X + X) / 3));
      const MomentEstimate m = kernel_moment(X, 4.0);
      CHECK(m.value == doctest::Approx(static_cast<double>(count)).epsilon(1e-9));
    }
  }

  TEST_CASE("refinement reports its trail") {
    const MomentEstimate m = kernel_moment(64, 3.0, {1e-8, 18, 8});
    CHECK(m.refinements >= 1);
    CHECK(m.last_delta <= 1e-8);
    CHECK(m.value > 0.0);
  }

  TEST_CASE("refinement budget exhaustion throws with estimates") {
    bool thrown = false;
    try {
      kernel_moment(10, 2.5, {1e-16, 1, 8});
    } catch (const non_convergence_error& e) {
      thrown = true;
      CHECK(e.last_estimate() > 0.0);
      CHECK(e.previous_estimate() > 0.0);
    }
    CHECK(thrown);
  }

  TEST_CASE("asymptotic scaled error for s = 4") {
    // E(X) = X/3 exactly, so the ratio column is 1/(3X)
    const KernelAsymptoticReport rep =
        verify_kernel_asymptotic(4.0, {16, 32, 64, 128}, 1e-9);
    CHECK(rep.passed);
    REQUIRE(rep.rows.size() == 4);
    for (const KernelAsymptoticRow& row : rep.rows) {
      const double expect = 1.0 / (3.0 * static_cast<double>(row.X));
      CHECK(row.ratio == doctest::Approx(expect).epsilon(0.05));
    }
    CHECK(rep.fitted_constant == doctest::Approx(1.0 / 48.0).epsilon(0.05));
  }

  TEST_CASE("asymptotic scaled error for s = 3") {
    const KernelAsymptoticReport rep =
        verify_kernel_asymptotic(3.0, {128, 256, 512}, 1e-9, {1e-9, 18, 8});
    CHECK(rep.passed);
    for (const KernelAsymptoticRow& row : rep.rows) {
      CHECK(row.ratio > 0.0);
      CHECK(row.ratio < 0.01);
    }
  }

  TEST_CASE("asymptotic input validation") {
    CHECK_THROWS_AS(verify_kernel_asymptotic(4.0, {}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(verify_kernel_asymptotic(4.0, {64, 32}, 1e-9), std::invalid_argument);
  }
}
