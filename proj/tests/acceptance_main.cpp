// Acceptance suite: one pass/fail line per criterion, exit 0 only if every
// criterion holds at its stated tolerance. Each criterion is the exact
// finite-truncation inequality the construction establishes, checked at desk
// scale with pinned tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kreisslab/bounds.hpp"
#include "kreisslab/constants.hpp"
#include "kreisslab/counterexamples.hpp"
#include "kreisslab/csr.hpp"
#include "kreisslab/dlp.hpp"
#include "kreisslab/linalg.hpp"
#include "kreisslab/rng.hpp"
#include "kreisslab/shift_families.hpp"

using namespace kreisslab;

namespace {

constexpr double kPi = 3.141592653589793;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

CMatrix seeded_contraction(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix a = rng.gaussian_matrix(n, n);
  return a / op_norm(a);
}

// 1. corner-entry telescoping at depth one
Outcome criterion_corner_telescoping() {
  Outcome out;
  for (double c : {0.01, 0.5, 1.0})
    for (long long N : {10ll, 1000ll, 100000ll}) {
      ShiftFamilySpec spec{ShiftVariant::cesaro, 1, c};
      const double corner = corner_entry(spec, N);
      const double expected = c * std::log(static_cast<double>(N));
      out.require(std::abs(corner - expected) <= 1e-12 * expected,
                  "corner(" + std::to_string(c) + "," + std::to_string(N) + ")");
    }
  return out;
}

// 2. closed-form bound <= corner <= measured power
Outcome criterion_power_chain() {
  Outcome out;
  for (int m : {1, 2})
    for (double eps : {0.25, 1.0})
      for (long long N : {64ll, 256ll}) {
        ShiftFamilySpec spec{ShiftVariant::cesaro, m, c_of_eps(eps, m)};
        const BoundReport r = verify_power_vs_bound(spec, N);
        out.require(r.bound_value <= r.corner + 1e-9,
                    "bound>corner at m=" + std::to_string(m) + ",N=" + std::to_string(N));
        out.require(r.corner <= r.measured_power * (1.0 + 1e-9),
                    "corner>power at m=" + std::to_string(m) + ",N=" + std::to_string(N));
      }
  return out;
}

// 3. product norm bound on 200 seeded random draws
Outcome criterion_product_norm_bound() {
  Outcome out;
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng.uniform_index(4));
    const int s = 1 + static_cast<int>(rng.uniform_index(6));
    std::vector<long long> ks;
    long long k = 2 + static_cast<long long>(rng.uniform_index(16));
    for (int i = 0; i < s; ++i) {
      ks.push_back(k);
      k += 1 + static_cast<long long>(rng.uniform_index(2000));
    }
    const double c = rng.uniform();
    ShiftFamilySpec spec{ShiftVariant::cesaro, p, c};
    CMatrix prod = weight_matrix(spec, ks[0]);
    for (int i = 1; i < s; ++i)
      prod = (prod * weight_matrix(spec, ks[static_cast<std::size_t>(i)])).eval();
    const double bound =
        std::pow(2.0, p - 1) *
        (1.0 + std::pow(std::log(static_cast<double>(ks.back()) / (ks.front() - 1)), p));
    out.require(op_norm(prod) <= bound + 1e-9, "trial " + std::to_string(trial));
  }
  return out;
}

// 4. power decomposition identity on the truncation
Outcome criterion_power_decomposition() {
  Outcome out;
  for (int m : {1, 2, 3}) {
    ShiftFamilySpec spec{ShiftVariant::cesaro, m, 0.31};
    const long long N = 64;
    TruncationSpec trunc{N};
    const CMatrix x = build_truncated_shift(spec, trunc);
    CMatrix xp = CMatrix::Identity(x.rows(), x.cols());
    double worst = 0.0;
    for (long long n = 1; n < N; ++n) {
      xp = (xp * x).eval();
      const CMatrix rhs = power_decomposition_rhs(spec, trunc, n);
      worst = std::max(worst, op_norm_iterative(xp - rhs));
    }
    out.require(worst <= 1e-10, "m=" + std::to_string(m) + " residual " + std::to_string(worst));
  }
  return out;
}

// 5. absolute Cesaro constant of the calibrated family stays within 1+eps
Outcome criterion_abs_cesaro_calibrated() {
  Outcome out;
  for (int m : {1, 2})
    for (double eps : {0.25, 1.0})
      for (long long N : {64ll, 256ll}) {
        ShiftFamilySpec spec{ShiftVariant::cesaro, m, c_of_eps(eps, m)};
        const CMatrix x = build_truncated_shift(spec, TruncationSpec{N});
        const ConstantEstimate est = abs_cesaro_constant(x);
        out.require(est.lower_estimate <= 1.0 + eps + 1e-6,
                    "m=" + std::to_string(m) + ",eps=" + std::to_string(eps) +
                        ",N=" + std::to_string(N) + " got " +
                        std::to_string(est.lower_estimate));
      }
  return out;
}

// 6. the a = 1/4 weighted shift: bounded averages, unbounded powers
Outcome criterion_weighted_shift_split() {
  Outcome out;
  const CMatrix t = build_muller_shift(256, 0.25);
  const ConstantEstimate ac = abs_cesaro_constant(t);
  out.require(ac.lower_estimate <= std::sqrt(6.0) + 1e-6,
              "abs cesaro " + std::to_string(ac.lower_estimate));
  ConstantsOptions opts;
  opts.n_max = 300;
  const ConstantEstimate pb = power_bound(t, opts);
  out.require(pb.lower_estimate >= std::pow(256.0, 0.25) * (1.0 - 1e-12),
              "power bound " + std::to_string(pb.lower_estimate));
  return out;
}

// 7. Kreiss estimator calibration
Outcome criterion_kreiss_calibration() {
  Outcome out;
  ConstantsOptions fast;
  fast.angle_points = 128;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const Eigen::Index dim = 8 + 6 * static_cast<Eigen::Index>(s % 10);
    const ConstantEstimate est = kreiss_constant(seeded_contraction(dim, s), fast);
    out.require(std::abs(est.lower_estimate - 1.0) <= 1e-4,
                "contraction seed " + std::to_string(s) + " got " +
                    std::to_string(est.lower_estimate));
  }
  for (long long N : {16ll, 64ll}) {
    const ConstantEstimate est = kreiss_constant(build_plain_shift(N, 1), fast);
    out.require(std::abs(est.lower_estimate - 1.0) <= 1e-4,
                "plain shift N=" + std::to_string(N));
  }
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 8.0;
  // dense radial oracle from the closed-form 2x2 singular value of
  // [[1/z, 8/z^2], [0, 1/z]] (the objective is angle-free here)
  double oracle = 0.0;
  for (int i = 1; i <= 1000000; ++i) {
    const double r = 1.0 + 999.0 * i / 1000000.0;
    const double aa = 1.0 / r, bb = 8.0 / (r * r);
    const double smax =
        std::sqrt(aa * aa + bb * bb / 2.0 +
                  bb * std::sqrt(aa * aa + bb * bb / 4.0));
    oracle = std::max(oracle, (r - 1.0) * smax);
  }
  const ConstantEstimate est = kreiss_constant(a);
  out.require(std::abs(est.lower_estimate - oracle) <= 1e-4 * oracle,
              "jordan cell got " + std::to_string(est.lower_estimate) + " vs oracle " +
                  std::to_string(oracle));
  return out;
}

// 8. positivity decomposition and ratio certificate for the catalog operator
Outcome criterion_dlp_positivity() {
  Outcome out;
  const CMatrix t = ritt_test(32, 10.0, 0);
  const VTypeCurve curve = VTypeCurve::power_law(1.0, 0.5, 1.0);
  const EpsilonProfile eps = EpsilonProfile::power(0.5, 1.0);
  const std::vector<long long> ns = {1, 2, 3, 4};
  const KSpectralCertificate cert = k_spectral_estimate(t, curve, eps, ns, 2048);
  for (const auto& per : cert.per_n) {
    out.require(per.max_reassembly_residual <= 1e-9,
                "reassembly n=" + std::to_string(per.n));
    const double ratio = verify_k_spectral(t, per.K_n, per.r_n, 100, 0);
    out.require(ratio <= per.K_n * (1.0 + 1e-6),
                "ratio n=" + std::to_string(per.n) + " " + std::to_string(ratio) + " vs " +
                    std::to_string(per.K_n));
  }
  // per-angle margins against their own scale
  for (long long n : ns) {
    const CurveDecomposition dec = decompose(t, curve, eps, n, 2048);
    for (const auto& row : dec.rows)
      out.require(row.psd_margin >= -1e-9 * std::max(1.0, row.psd_scale),
                  "psd margin at theta " + std::to_string(row.theta));
    if (!out.pass) break;
  }
  out.require(cert.warnings.empty(), "hypothesis warnings present");
  return out;
}

// 9. reproducing identity and Poisson factorization
Outcome criterion_dlp_identities() {
  Outcome out;
  Rng rng(5);
  CMatrix t = rng.gaussian_matrix(6, 6);
  t *= 0.7 / op_norm(t);
  const int grid = 8192;
  const double r = 1.1;
  for (int deg : {2, 5, 8}) {
    std::vector<cd> coeff(static_cast<std::size_t>(deg) + 1);
    for (auto& c : coeff) c = rng.cnormal();
    const PolyCoeffs p(coeff);
    double norm_p = 0.0;
    for (auto& c : coeff) norm_p = std::max(norm_p, std::abs(c));
    CMatrix acc = CMatrix::Zero(6, 6);
    for (int i = 0; i < grid; ++i) {
      const double th = -kPi + (i + 0.5) * 2.0 * kPi / grid;
      acc += mu_dlp(t, r, th) * poly_eval(p, r * cd(std::cos(th), std::sin(th)));
    }
    acc *= 2.0 * kPi / grid;
    const CMatrix expected = poly_eval(p, t) + coeff[0] * CMatrix::Identity(6, 6);
    out.require(op_norm(acc - expected) <= 1e-6 * (deg + 1) * std::max(1.0, norm_p),
                "reproducing identity deg " + std::to_string(deg));
  }
  Rng prng(17);
  for (int i = 0; i < 100; ++i) {
    CMatrix m = Rng(1000 + static_cast<std::uint64_t>(i)).gaussian_matrix(5, 5);
    m *= 0.6 / op_norm(m);
    const double rr = 0.1 + 0.4 * prng.uniform();
    const double phase = prng.uniform(-kPi, kPi);
    const cd v(1.4 + prng.uniform(), prng.uniform(-0.5, 0.5));
    const cd c = v - cd(0, 1) * rr * std::polar(1.0, phase);
    out.require(poisson_factorization_check(m, v, c, rr) <= 1e-10,
                "factorization instance " + std::to_string(i));
  }
  return out;
}

// 10. resolvent envelope and unbounded power growth
Outcome criterion_resolvent_counterexample() {
  Outcome out;
  const ZGrid grid = annulus_grid(3.0, 64, 64);
  const double l_emp = estimate_L(0.05, {64, 128}, grid);
  for (long long N : {64ll, 128ll})
    for (double c : {0.02, 0.05}) {
      const double slack = resolvent_envelope_check(N, c, l_emp, grid);
      out.require(slack >= -1e-9, "slack N=" + std::to_string(N) + ",c=" +
                                      std::to_string(c) + " " + std::to_string(slack));
    }
  const CNSequence cn = CNSequence::inv_sqrt_log();
  double prev = 0.0;
  for (long long N = 16; N <= 1024; N *= 2) {
    ShiftFamilySpec spec{ShiftVariant::cesaro, 1, cn.at(N)};
    const double power = shift_power_norm(spec, TruncationSpec{N}, N - 1);
    out.require(power >= cn.at(N) * std::log(static_cast<double>(N)) - 1e-12,
                "power floor at N=" + std::to_string(N));
    out.require(power > prev, "monotonicity at N=" + std::to_string(N));
    prev = power;
  }
  return out;
}

// 11. scalar-model exactness and Foguel-Hankel norm bound
Outcome criterion_pisier_model() {
  Outcome out;
  const BetaSequence beta = BetaSequence::inv_log(600);
  for (long long n = 1; n <= 32; ++n) {
    const PisierNorm pn = pisier_X_norm(beta, n, 512);
    out.require(std::abs(pn.matrix_value - pn.closed_form) <=
                    1e-10 * std::max(1.0, pn.closed_form),
                "corner norm n=" + std::to_string(n));
  }
  const long long M = 256;
  const CMatrix f = build_foguel_hankel_trunc(beta, M);
  Csr sf(f, 0.0);
  CMatrix p = CMatrix::Identity(2 * M, 2 * M);
  CVector warm;
  for (long long n = 1; n <= 64; ++n) {
    p = sf.apply_left(p);
    const double nrm = op_norm_iterative(p, &warm);
    out.require(nrm <= 1.0 + std::sqrt(beta.at(n)) + 1e-9,
                "power norm n=" + std::to_string(n) + " " + std::to_string(nrm));
  }
  double first = 0.0, last = 0.0;
  for (double a : {0.9, 0.99, 0.999, 0.9999}) {
    const double rat = epsconversion_ratio(a);
    out.require(std::isfinite(rat) && rat > 0.0, "ratio at a=" + std::to_string(a));
    if (first == 0.0) first = rat;
    last = rat;
  }
  out.require(last <= first * (1.0 + 0.5), "ratio increased across the sweep");
  return out;
}

// 12. closed-form bound values
Outcome criterion_bound_formulas() {
  Outcome out;
  for (int m = 1; m <= 8; ++m)
    out.require(kappa(m) <= kappa_bound(m), "kappa m=" + std::to_string(m));
  out.require(std::abs(c_of_eps(1.0, 1) - 0.0654853) <= 1e-6, "c_of_eps(1,1)");
  const ComparisonBounds cb = comparison_bounds(10.0, 1.0);
  out.require(std::abs(cb.spijker - 10.0 * std::exp(1.0)) <= 1e-12, "spijker(10,1)");
  out.require(!cb.nikolski.has_value(), "nikolski defined below pi+1");
  const ComparisonBounds cb2 = comparison_bounds(100.0, 5.0);
  out.require(cb2.nikolski &&
                  std::abs(*cb2.nikolski - std::pow(100.0, 0.6) / 5.0) <= 1e-12,
              "nikolski(100,5)");
  return out;
}

} // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> criteria = {
      {"corner-entry telescoping", criterion_corner_telescoping},
      {"power chain bound<=corner<=measured", criterion_power_chain},
      {"product norm bound (200 draws)", criterion_product_norm_bound},
      {"power decomposition identity", criterion_power_decomposition},
      {"calibrated absolute Cesaro constant", criterion_abs_cesaro_calibrated},
      {"weighted shift: bounded averages, growing powers", criterion_weighted_shift_split},
      {"Kreiss estimator calibration", criterion_kreiss_calibration},
      {"positivity decomposition certificate", criterion_dlp_positivity},
      {"double-layer identities", criterion_dlp_identities},
      {"resolvent envelope counterexample", criterion_resolvent_counterexample},
      {"scalar-model exactness and power bound", criterion_pisier_model},
      {"closed-form bound values", criterion_bound_formulas},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("[%s] criterion %2zu: %s (%lld ms)%s%s\n", out.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, static_cast<long long>(ms),
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
