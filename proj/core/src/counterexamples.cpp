#include "kreisslab/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kreisslab/linalg.hpp"
#include "kreisslab/parallel.hpp"
#include "kreisslab/shift_families.hpp"

namespace kreisslab {

namespace {
constexpr double kPi = 3.141592653589793;
}

// ---------------------------------------------------------------------------
// sequences

BetaSequence BetaSequence::inv_log(long long length) {
  if (length < 3) throw input_error("BetaSequence: require length >= 3");
  BetaSequence b;
  b.gen_ = Gen::inv_log;
  b.length_ = length;
  b.validate();
  return b;
}

BetaSequence BetaSequence::tabulated(std::vector<double> values) {
  if (values.size() < 3) throw input_error("BetaSequence: require length >= 3");
  BetaSequence b;
  b.gen_ = Gen::tabulated;
  b.length_ = static_cast<long long>(values.size());
  b.table_ = std::move(values);
  b.validate();
  return b;
}

double BetaSequence::at(long long n) const {
  if (n < 1 || n > length_) throw input_error("BetaSequence: index out of range");
  if (gen_ == Gen::inv_log) return 1.0 / std::log(static_cast<double>(n) + 1.0);
  return table_[static_cast<std::size_t>(n - 1)];
}

void BetaSequence::validate() const {
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (long long n = 1; n <= length_; ++n) {
    const double b = at(n);
    if (!(b > 0.0)) throw input_error("BetaSequence: entries must be positive");
    const double ratio = b / (static_cast<double>(n) * static_cast<double>(n));
    if (ratio > prev_ratio * (1.0 + 1e-12))
      throw input_error("BetaSequence: n^{-2} beta_n must be decreasing");
    prev_ratio = ratio;
  }
  if (length_ >= 16 && at(length_) > at(1))
    throw input_error("BetaSequence: must trend to zero");
}

CNSequence CNSequence::inv_sqrt_log(long long N0) {
  if (N0 < 2) throw input_error("CNSequence: require N0 >= 2");
  CNSequence c;
  c.gen_ = Gen::inv_sqrt_log;
  c.N0_ = N0;
  return c;
}

CNSequence CNSequence::tabulated(std::vector<double> values, long long N0) {
  if (values.empty() || N0 < 2) throw input_error("CNSequence: bad table");
  CNSequence c;
  c.gen_ = Gen::tabulated;
  c.N0_ = N0;
  c.table_ = std::move(values);
  c.validate();
  return c;
}

double CNSequence::at(long long N) const {
  if (N < N0_) throw input_error("CNSequence: index below N0");
  if (gen_ == Gen::inv_sqrt_log) return 1.0 / std::sqrt(std::log(static_cast<double>(N)));
  if (N - N0_ >= static_cast<long long>(table_.size()))
    throw input_error("CNSequence: index beyond the table");
  return table_[static_cast<std::size_t>(N - N0_)];
}

long long CNSequence::max_N() const {
  return gen_ == Gen::inv_sqrt_log
             ? std::numeric_limits<long long>::max() / 2
             : N0_ + static_cast<long long>(table_.size()) - 1;
}

void CNSequence::validate() const {
  const long long hi = std::min<long long>(max_N(), N0_ + 4096);
  double prev = std::numeric_limits<double>::infinity();
  double prev_clog = 0.0;
  bool clog_grows = true;
  for (long long N = N0_; N <= hi; ++N) {
    const double c = at(N);
    if (!(c > 0.0)) throw input_error("CNSequence: entries must be positive");
    if (c > prev * (1.0 + 1e-12)) throw input_error("CNSequence: must be decreasing");
    prev = c;
    const double clog = c * std::log(static_cast<double>(N));
    if (N > N0_ + 16 && clog < prev_clog * 0.5) clog_grows = false;
    prev_clog = std::max(prev_clog, clog);
  }
  if (!clog_grows) throw input_error("CNSequence: c_N log N must trend upward");
}

// ---------------------------------------------------------------------------

ZGrid annulus_grid(double r_hi, int radial, int angles, double closest) {
  if (!(r_hi > 1.0) || radial < 1 || angles < 1 || !(closest > 0.0))
    throw input_error("annulus_grid: bad parameters");
  ZGrid g;
  g.angles = angles;
  for (int i = 0; i < radial; ++i) {
    const double t = radial == 1 ? 0.0 : static_cast<double>(i) / (radial - 1);
    // log-spaced |z|-1 from (r_hi - 1) down to `closest`
    g.radii.push_back(1.0 + (r_hi - 1.0) * std::pow(closest / (r_hi - 1.0), t));
  }
  return g;
}

double estimate_L(double c, const std::vector<long long>& N_list, const ZGrid& grid) {
  if (!(c >= 0.0) || c > 1.0) throw input_error("estimate_L: require 0 <= c <= 1");
  if (N_list.empty()) throw input_error("estimate_L: empty N list");
  double best = 0.0;
  for (long long N : N_list) {
    if (N < 2) throw input_error("estimate_L: require N >= 2");
    // offset-k weights: entry (j, j+k) of W_{1,k} is log((k+j+1)/(j+1)),
    // 0-based slots; the weights do not depend on c at depth one
    std::vector<std::vector<double>> wdiag(static_cast<std::size_t>(N));
    for (long long k = 1; k < N; ++k) {
      auto& d = wdiag[static_cast<std::size_t>(k)];
      d.resize(static_cast<std::size_t>(N - k));
      for (long long j = 0; j + k < N; ++j)
        d[static_cast<std::size_t>(j)] =
            std::log(static_cast<double>(k + j + 1) / static_cast<double>(j + 1));
    }
    std::vector<double> per_radius(grid.radii.size(), 0.0);
    parallel_for(grid.radii.size(), [&](std::size_t ri) {
      const double r = grid.radii[ri];
      CMatrix s(N, N);
      double local = 0.0;
      CVector warm;
      for (int ai = 0; ai < grid.angles; ++ai) {
        const double th = -kPi + (ai + 0.5) * 2.0 * kPi / grid.angles;
        const cd z = r * cd(std::cos(th), std::sin(th));
        s.setZero();
        // terms k >= N vanish under the N-slot truncation, k = 0 is the
        // zero operator, so only k = 1..N-1 contribute
        cd zpow = 1.0 / z;
        for (long long k = 1; k < N; ++k) {
          zpow /= z; // z^{-k-1}
          const auto& d = wdiag[static_cast<std::size_t>(k)];
          for (long long j = 0; j + k < N; ++j) s(j, j + k) = zpow * d[static_cast<std::size_t>(j)];
        }
        local = std::max(local, (r - 1.0) * op_norm_iterative(s, &warm));
      }
      per_radius[ri] = local;
    });
    for (double v : per_radius) best = std::max(best, v);
  }
  return best;
}

double epsilon_of_x(double x, const CNSequence& cn, double L) {
  if (!(x > 0.0)) throw input_error("epsilon_of_x: require x > 0");
  if (!(L >= 0.0)) throw input_error("epsilon_of_x: require L >= 0");
  double sup = -std::numeric_limits<double>::infinity();
  const long long hard_cap = 1ll << 26;
  for (long long N = cn.N0(); N <= cn.max_N() && N <= hard_cap; ++N) {
    const double cl = cn.at(N) * L;
    const double val = cl - std::exp(-static_cast<double>(N) * std::log1p(x));
    sup = std::max(sup, val);
    if (cl < sup) break; // every later term is below c_N L < sup
  }
  return sup;
}

double resolvent_envelope_check(long long N, double c, double L, const ZGrid& grid) {
  if (!(c * L < 1.0))
    throw precondition_error("resolvent_envelope_check: requires c L < 1");
  ShiftFamilySpec spec{ShiftVariant::cesaro, 1, c};
  TruncationSpec trunc{N};
  trunc.validate(spec);
  std::vector<double> per_radius(grid.radii.size(),
                                 std::numeric_limits<double>::infinity());
  parallel_for(grid.radii.size(), [&](std::size_t ri) {
    const double r = grid.radii[ri];
    double worst = std::numeric_limits<double>::infinity();
    CVector warm; // resolvents at adjacent angles share singular directions
    for (int ai = 0; ai < grid.angles; ++ai) {
      const double th = -kPi + (ai + 0.5) * 2.0 * kPi / grid.angles;
      const cd z = r * cd(std::cos(th), std::sin(th));
      const double measured = shift_resolvent_norm(spec, trunc, z, &warm);
      const double envelope =
          (1.0 + c * L - std::exp(-static_cast<double>(N) * std::log(r))) / (r - 1.0);
      worst = std::min(worst, envelope - measured);
    }
    per_radius[ri] = worst;
  });
  double worst = std::numeric_limits<double>::infinity();
  for (double v : per_radius) worst = std::min(worst, v);
  return worst;
}

// ---------------------------------------------------------------------------
// Pisier-type model

double pisier_coeff(const BetaSequence& beta, long long n) {
  if (n < 0) throw input_error("pisier_coeff: require n >= 0");
  if (n + 2 > beta.length())
    throw input_error("pisier_coeff: needs beta up to n+2");
  const double b1 = beta.at(n + 1), b2 = beta.at(n + 2);
  const double d1 = static_cast<double>(n + 1), d2 = static_cast<double>(n + 2);
  const double rad = b1 / (d1 * d1) - b2 / (d2 * d2);
  if (rad < -1e-15 * b1)
    throw input_error("pisier_coeff: negative radicand, beta violates monotonicity");
  return std::sqrt(std::max(0.0, rad));
}

PisierNorm pisier_X_norm(const BetaSequence& beta, long long n, long long M) {
  if (n < 1) throw input_error("pisier_X_norm: require n >= 1");
  if (M < n + 2) throw input_error("pisier_X_norm: require M >= n + 2");
  if (M > beta.length()) throw input_error("pisier_X_norm: beta too short for M");
  const long long a_max = M - 2; // a_k defined for k <= M-2
  // column j of n X S^{n-1} has entries n a_{i+j+n-1} on pairwise-disjoint
  // rows; accumulate the diagonal Gram entries from the assembled columns
  double best_gram = 0.0;
  for (long long j = 0; j + n - 1 <= a_max; ++j) {
    double gram = 0.0;
    for (long long k = j + n - 1; k <= a_max; ++k) {
      const double a = pisier_coeff(beta, k);
      const double entry = static_cast<double>(n) * a;
      gram += entry * entry;
    }
    best_gram = std::max(best_gram, gram);
  }
  PisierNorm out;
  out.matrix_value = std::sqrt(best_gram);
  const double nd = static_cast<double>(n);
  const double tail = nd * nd * beta.at(M) / (static_cast<double>(M) * M);
  out.closed_form = std::sqrt(std::max(0.0, beta.at(n) - tail));
  return out;
}

CMatrix build_foguel_hankel_trunc(const BetaSequence& beta, long long M) {
  if (M < 2 || M > 1024) throw input_error("build_foguel_hankel_trunc: require 2 <= M <= 1024");
  if (M + 1 > beta.length())
    throw input_error("build_foguel_hankel_trunc: beta too short for M");
  // w_j^2 = sum_{k >= j} |a_k|^2; exact telescoped value beta_{j+1}/(j+1)^2
  // for generator-backed sequences, a partial sum for tabulated ones
  std::vector<double> w(static_cast<std::size_t>(M) + 1, 0.0);
  if (beta.has_closed_tail()) {
    for (long long j = 0; j <= M; ++j)
      w[static_cast<std::size_t>(j)] =
          std::sqrt(beta.at(j + 1)) / static_cast<double>(j + 1);
  } else {
    const long long a_max = beta.length() - 2;
    for (long long j = 0; j <= std::min(M, a_max); ++j) {
      double s = 0.0;
      for (long long k = j; k <= a_max; ++k) {
        const double a = pisier_coeff(beta, k);
        s += a * a;
      }
      w[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
  }
  CMatrix f = CMatrix::Zero(2 * M, 2 * M);
  for (long long j = 0; j + 1 < M; ++j) {
    // corner-image block: forward shift with weights w_{j+1}/w_j
    f(j + 1, j) = w[static_cast<std::size_t>(j + 1)] / w[static_cast<std::size_t>(j)];
    // domain block: plain forward shift
    f(M + j + 1, M + j) = 1.0;
  }
  for (long long j = 0; j < M; ++j) f(j, M + j) = w[static_cast<std::size_t>(j)];
  return f;
}

double epsconversion_ratio(double a) {
  if (!(a > 0.0 && a < 1.0)) throw input_error("epsconversion_ratio: require 0 < a < 1");
  double sum = 0.0;
  double apow = a; // a^1
  for (long long n = 2; n < (1ll << 40); ++n) {
    apow *= a;
    const double term = apow / std::sqrt(std::log(static_cast<double>(n)));
    sum += term;
    if (term < 1e-16 * sum && n > 8) break;
  }
  const double denom = std::pow(std::abs(std::log(1.0 - a)), -0.5) / (1.0 - a);
  return sum / denom;
}

EpsilonImplied resolvent_epsilon_profile(const std::vector<double>& F_norms,
                                         double lam_abs) {
  if (!(lam_abs > 1.0)) throw input_error("resolvent_epsilon_profile: require |lambda| > 1");
  if (F_norms.empty()) throw input_error("resolvent_epsilon_profile: empty norm list");
  for (double v : F_norms)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw input_error("resolvent_epsilon_profile: bad norm entry");
  // the list is continued with its last value; reject sequences still growing
  // at a rate the geometric weight cannot absorb
  const double tail_scale = F_norms.back();
  if (F_norms.size() >= 2 && tail_scale >= F_norms[F_norms.size() - 2] * lam_abs)
    throw range_error("resolvent_epsilon_profile: majorant diverges");
  double majorant = 0.0;
  double lpow = 1.0 / lam_abs; // lam^{-(n+1)} at n = 0
  for (std::size_t n = 0; n < F_norms.size(); ++n) {
    majorant += F_norms[n] * lpow;
    lpow /= lam_abs;
  }
  // continue with the last value: tail = last * lam^{-(len+1)} / (1 - 1/lam)
  majorant += tail_scale * lpow / (1.0 - 1.0 / lam_abs);
  EpsilonImplied out;
  out.majorant = majorant;
  out.implied_eps = (lam_abs - 1.0) * majorant - 1.0;
  return out;
}

} // namespace kreisslab
