#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kreisslab/counterexamples.hpp"
#include "kreisslab/csr.hpp"
#include "kreisslab/linalg.hpp"
#include "kreisslab/shift_families.hpp"

using namespace kreisslab;

TEST_CASE("beta and c_N sequences") {
  const BetaSequence beta = BetaSequence::inv_log(64);
  CHECK(beta.at(1) == doctest::Approx(1.0 / std::log(2.0)));
  CHECK(beta.at(64) < beta.at(1));
  CHECK_THROWS_AS(BetaSequence::tabulated({1.0, 5.0, 100.0}), input_error); // n^{-2} beta_n grows

  const CNSequence cn = CNSequence::inv_sqrt_log();
  CHECK(cn.at(16) == doctest::Approx(1.0 / std::sqrt(std::log(16.0))));
  CHECK(cn.at(1024) < cn.at(16));
}

TEST_CASE("estimate_L is stable under grid refinement and c-free at depth one") {
  const ZGrid base = annulus_grid(3.0, 16, 16);
  const ZGrid fine = annulus_grid(3.0, 32, 32);
  const double l1 = estimate_L(0.05, {32}, base);
  const double l2 = estimate_L(0.05, {32}, fine);
  CHECK(l2 >= l1 - 1e-12); // finer grid only finds more
  CHECK(std::abs(l2 - l1) <= 0.05 * l2);
  // the depth-one W blocks do not involve c at all
  CHECK(estimate_L(0.9, {32}, base) == doctest::Approx(l1).epsilon(1e-14));
  CHECK(std::isfinite(l1));
  CHECK(l1 > 0.0);
}

TEST_CASE("epsilon_of_x") {
  const CNSequence cn = CNSequence::inv_sqrt_log();
  const double L = 1.5;
  // monotone in x
  double prev = -1.0;
  for (double x : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const double v = epsilon_of_x(x, cn, L);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  // decreasing toward 0 as x -> 0+
  double prev_down = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 10; ++k) {
    const double v = epsilon_of_x(std::pow(10.0, -k), cn, L);
    CHECK(v <= prev_down + 1e-15);
    prev_down = v;
  }
  // single-term lower bound with a constant sequence
  const CNSequence flat = CNSequence::tabulated(std::vector<double>(4096, 0.125), 2);
  const double v = epsilon_of_x(0.5, flat, 1.0);
  CHECK(v >= 0.125 - std::pow(1.5, -2.0));
  CHECK(v <= 0.125);
}

TEST_CASE("resolvent envelope") {
  const ZGrid grid = annulus_grid(3.0, 16, 16);
  SUBCASE("plain shift with c = 0") {
    const double slack = resolvent_envelope_check(32, 0.0, 0.0, grid);
    CHECK(slack >= -1e-12);
  }
  SUBCASE("weighted truncation with measured L") {
    const double L = estimate_L(0.05, {64}, grid);
    REQUIRE(0.05 * L < 1.0);
    const double slack = resolvent_envelope_check(64, 0.05, L, grid);
    CHECK(slack >= -1e-9);
  }
  SUBCASE("cL >= 1 is rejected") {
    CHECK_THROWS_AS(resolvent_envelope_check(16, 0.9, 2.0, grid), precondition_error);
  }
}

TEST_CASE("geometric-series envelope is exact in trend for c = 0") {
  // the resolvent of the nilpotent shift IS the truncated geometric series;
  // the envelope majorizes it everywhere and tightens to equality in ratio
  // as the radius grows (where the leading 1/z term dominates)
  const long long N = 32;
  ShiftFamilySpec spec{ShiftVariant::cesaro, 1, 0.0};
  TruncationSpec trunc{N};
  double prev_ratio = 0.0;
  for (double r : {1.001, 1.1, 2.0, 8.0}) {
    const double measured = op_norm(shift_resolvent_dense(spec, trunc, cd(r, 0)));
    const double envelope = (1.0 - std::pow(r, -static_cast<double>(N))) / (r - 1.0);
    const double ratio = measured / envelope;
    CHECK(ratio <= 1.0 + 1e-12);
    CHECK(ratio > prev_ratio); // monotone approach to equality
    prev_ratio = ratio;
  }
  CHECK(prev_ratio > 0.99);
}

TEST_CASE("pisier coefficients telescope") {
  const BetaSequence beta = BetaSequence::inv_log(600);
  const double a1 = pisier_coeff(beta, 1);
  CHECK(a1 * a1 ==
        doctest::Approx(beta.at(2) / 4.0 - beta.at(3) / 9.0).epsilon(1e-14));
  // partial telescoping: n^2 sum_{k=n-1}^{M} a_k^2 = beta_n - n^2 beta_{M+2}/(M+2)^2
  const long long n = 5, M = 400;
  double s = 0.0;
  for (long long k = n - 1; k <= M; ++k) {
    const double a = pisier_coeff(beta, k);
    s += a * a;
  }
  const double lhs = static_cast<double>(n) * n * s;
  const double rhs = beta.at(n) - static_cast<double>(n) * n * beta.at(M + 2) /
                                      (static_cast<double>(M + 2) * (M + 2));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  // (n+1)^2 |a_n|^2 sums grow without bound (log-log growth)
  double partial = 0.0, at64 = 0.0, at512 = 0.0;
  for (long long k = 0; k <= 512; ++k) {
    const double a = pisier_coeff(beta, k);
    partial += (k + 1.0) * (k + 1.0) * a * a;
    if (k == 64) at64 = partial;
    if (k == 512) at512 = partial;
  }
  CHECK(at512 > at64);
}

TEST_CASE("pisier corner norm: assembled matrix vs closed form") {
  const BetaSequence beta = BetaSequence::inv_log(512);
  for (long long n : {1ll, 4ll, 17ll, 32ll}) {
    const PisierNorm pn = pisier_X_norm(beta, n, 512);
    CHECK(std::abs(pn.matrix_value - pn.closed_form) <=
          1e-10 * std::max(1.0, pn.closed_form));
    CHECK(pn.matrix_value <= std::sqrt(beta.at(n)));
  }
  // the norm approaches sqrt(beta_n) as M grows
  const double v_small = pisier_X_norm(beta, 2, 64).matrix_value;
  const double v_large = pisier_X_norm(beta, 2, 512).matrix_value;
  CHECK(v_large > v_small);
  CHECK(std::sqrt(beta.at(2)) - v_large < std::sqrt(beta.at(2)) - v_small);
  // value^2 within 1/M of beta_1 for n = 1, M = 512
  const PisierNorm p1 = pisier_X_norm(beta, 1, 512);
  CHECK(std::abs(p1.matrix_value * p1.matrix_value - beta.at(1)) <= 1.0 / 512.0);
}

TEST_CASE("pisier corner norm against a dense SVD at small size") {
  // assemble the full doubly-indexed matrix and take its SVD; the structured
  // route must agree
  const BetaSequence beta = BetaSequence::inv_log(40);
  const long long M = 40, n = 3;
  const long long a_max = M - 2;
  CMatrix big = CMatrix::Zero(M * (2 * M), M);
  for (long long j = 0; j + n - 1 <= a_max; ++j)
    for (long long i = 0; i + j + n - 1 <= a_max; ++i) {
      const long long inner = i + j + n - 1;
      big(i * (2 * M) + inner, j) = static_cast<double>(n) * pisier_coeff(beta, inner);
    }
  const double dense = op_norm(big);
  const PisierNorm pn = pisier_X_norm(beta, n, M);
  CHECK(std::abs(dense - pn.matrix_value) <= 1e-10 * std::max(1.0, dense));
}

TEST_CASE("foguel-hankel truncation") {
  const BetaSequence beta = BetaSequence::inv_log(300);
  const long long M = 128;
  const CMatrix f = build_foguel_hankel_trunc(beta, M);
  REQUIRE(f.rows() == 2 * M);

  SUBCASE("power norms obey 1 + sqrt(beta_n)") {
    Csr sf(f, 0.0);
    CMatrix p = CMatrix::Identity(2 * M, 2 * M);
    for (long long n = 1; n <= 48; ++n) {
      p = sf.apply_left(p);
      CHECK(op_norm(p) <= 1.0 + std::sqrt(beta.at(n)) + 1e-9);
    }
  }
  SUBCASE("the (1,2) block of F^n is n X S^{n-1}") {
    Csr sf(f, 0.0);
    CMatrix p = CMatrix::Identity(2 * M, 2 * M);
    const CMatrix x = f.topRightCorner(M, M);
    const CMatrix s = f.bottomRightCorner(M, M);
    CMatrix spow = CMatrix::Identity(M, M);
    for (long long n = 1; n <= 12; ++n) {
      p = sf.apply_left(p);
      const CMatrix block = p.topRightCorner(M, M);
      const CMatrix expected = static_cast<double>(n) * x * spow;
      CHECK(op_norm(block - expected) <= 1e-12 * std::max(1.0, op_norm(expected)));
      spow = s * spow;
    }
  }
  SUBCASE("corner norm attains sqrt(beta_n) exactly") {
    Csr sf(f, 0.0);
    CMatrix p = CMatrix::Identity(2 * M, 2 * M);
    for (long long n = 1; n <= 8; ++n) {
      p = sf.apply_left(p);
      CHECK(op_norm(p.topRightCorner(M, M)) ==
            doctest::Approx(std::sqrt(beta.at(n))).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero beta degenerates to pure shifts") {
  // with vanishing corner the model is a direct sum of two shifts
  const BetaSequence beta = BetaSequence::inv_log(40);
  CMatrix f = build_foguel_hankel_trunc(beta, 16);
  f.topRightCorner(16, 16).setZero(); // kill the corner
  Csr sf(f, 0.0);
  CMatrix p = CMatrix::Identity(32, 32);
  for (int n = 1; n <= 10; ++n) {
    p = sf.apply_left(p);
    CHECK(op_norm(p) <= 1.0 + 1e-12);
  }
}

TEST_CASE("epsconversion ratio stays bounded") {
  double worst = 0.0;
  std::vector<double> ratios;
  for (double a : {0.9, 0.99, 0.999, 0.9999}) {
    const double r = epsconversion_ratio(a);
    CHECK(r > 0.0);
    CHECK(std::isfinite(r));
    ratios.push_back(r);
    worst = std::max(worst, r);
  }
  CHECK(worst <= 10.0);
  // no growth trend across the sweep
  CHECK(ratios.back() <= ratios.front() * 2.0 + 1.0);
  CHECK(epsconversion_ratio(0.5) > 0.0);
}

TEST_CASE("implied epsilon profile from power norms") {
  SUBCASE("flat norms give the exact geometric series") {
    const std::vector<double> ones(64, 1.0);
    const EpsilonImplied e = resolvent_epsilon_profile(ones, 1.25);
    CHECK(e.majorant == doctest::Approx(1.0 / 0.25).epsilon(1e-12));
    CHECK(std::abs(e.implied_eps) <= 1e-12);
  }
  SUBCASE("foguel-hankel norms fit C (log 1/x)^{-1/2}") {
    const BetaSequence beta = BetaSequence::inv_log(4096);
    std::vector<double> norms;
    norms.push_back(1.0);
    for (long long n = 1; n < 4096; ++n) norms.push_back(1.0 + std::sqrt(beta.at(n)));
    double cmax = 0.0, cmin = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 8; ++k) {
      const double x = std::pow(10.0, -k);
      const EpsilonImplied e = resolvent_epsilon_profile(norms, 1.0 + x);
      const double shape = std::pow(std::log(1.0 / x), -0.5);
      cmax = std::max(cmax, e.implied_eps / shape);
      cmin = std::min(cmin, e.implied_eps / shape);
    }
    CHECK(cmax < 8.0);       // bounded fit constant
    CHECK(cmin > 0.05);      // and genuinely of that shape
    CHECK(cmax / cmin < 6.0);
  }
  SUBCASE("majorant decreases in |lambda|") {
    const std::vector<double> ones(16, 1.0);
    CHECK(resolvent_epsilon_profile(ones, 1.5).majorant <
          resolvent_epsilon_profile(ones, 1.2).majorant);
  }
  SUBCASE("divergent majorant is rejected") {
    CHECK_THROWS_AS(resolvent_epsilon_profile({1.0, 10.0}, 1.5), range_error);
  }
}

TEST_CASE("power growth of X_{1,N}(c_N) is strictly increasing") {
  const CNSequence cn = CNSequence::inv_sqrt_log();
  double prev = 0.0;
  for (long long N = 16; N <= 256; N *= 2) {
    ShiftFamilySpec spec{ShiftVariant::cesaro, 1, cn.at(N)};
    const double power = shift_power_norm(spec, TruncationSpec{N}, N - 1);
    CHECK(power >= cn.at(N) * std::log(static_cast<double>(N)) - 1e-12);
    CHECK(power > prev);
    prev = power;
  }
}
