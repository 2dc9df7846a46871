#pragma once

#include <string>
#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// beta_n > 0, beta_n -> 0, with n^{-2} beta_n decreasing; the default
/// generator is beta_n = 1/log(n+1).
class BetaSequence {
public:
  enum class Gen { inv_log, tabulated };

  static BetaSequence inv_log(long long length);
  static BetaSequence tabulated(std::vector<double> values); // values[i] = beta_{i+1}

  double at(long long n) const; // beta_n, 1 <= n <= length
  long long length() const { return length_; }
  Gen gen() const { return gen_; }
  /// Exact infinite tail n^2 sum_{k >= n-1} |a_k|^2 = beta_n when the
  /// generator extends beyond the tabulated range; otherwise the partial sum.
  bool has_closed_tail() const { return gen_ == Gen::inv_log; }
  void validate() const;

private:
  Gen gen_ = Gen::inv_log;
  long long length_ = 0;
  std::vector<double> table_;
};

/// c_N decreasing to 0 with c_N log N -> infinity; default 1/sqrt(log N).
class CNSequence {
public:
  enum class Gen { inv_sqrt_log, tabulated };

  static CNSequence inv_sqrt_log(long long N0 = 2);
  static CNSequence tabulated(std::vector<double> values, long long N0); // values[i] = c_{N0+i}

  double at(long long N) const;
  long long N0() const { return N0_; }
  long long max_N() const;
  void validate() const;

private:
  Gen gen_ = Gen::inv_sqrt_log;
  long long N0_ = 2;
  std::vector<double> table_;
};

struct ZGrid {
  std::vector<double> radii; // all > 1
  int angles = 64;
};

/// Log-spaced annulus grid accumulating at |z| = 1.
ZGrid annulus_grid(double r_hi, int radial, int angles, double closest = 1e-6);

/// Empirical constant of the W-tail partial sums:
/// max over N in N_list and z in the grid of
///   (|z|-1) || sum_{k=0..N} z^{-k-1} W_{1,k}(c) ||  (truncated to N slots).
double estimate_L(double c, const std::vector<long long>& N_list, const ZGrid& grid);

/// eps(x) = sup_{N >= N0} { c_N L - (1+x)^{-N} }, scanned upward with the
/// certified stop c_N L < running max.
double epsilon_of_x(double x, const CNSequence& cn, double L);

/// min over the grid of (1 + cL - |z|^{-N})/(|z|-1) - ||(zI - X_{1,N}(c))^{-1}||;
/// nonnegative slack certifies the resolvent envelope on the grid.
double resolvent_envelope_check(long long N, double c, double L, const ZGrid& grid);

/// a_n = sqrt(beta_{n+1}/(n+1)^2 - beta_{n+2}/(n+2)^2), n >= 0.
double pisier_coeff(const BetaSequence& beta, long long n);

struct PisierNorm {
  double matrix_value = 0.0; // norm of the assembled truncated model
  double closed_form = 0.0;  // sqrt(beta_n - tail correction)
};

/// || n X S^{n-1} || of the matrix-unit scalar model at truncation M: the
/// assembled operator has one nonzero per row, so its Gram matrix is diagonal
/// and the norm is exact.
PisierNorm pisier_X_norm(const BetaSequence& beta, long long n, long long M);

/// 2M x 2M compression of the Foguel-Hankel model to the invariant subspace
/// spanned by the orthonormal images of the Hankel corner and the domain
/// column: [[shift with weights w_{j+1}/w_j, diag(w_j)], [0, shift]] with
/// w_j = sqrt(beta_{j+1})/(j+1). Powers of the compression equal compressed
/// powers, the (1,2) block of the n-th power is exactly n X S^{n-1}, and
/// ||F^n|| <= 1 + sqrt(beta_n).
CMatrix build_foguel_hankel_trunc(const BetaSequence& beta, long long M);

/// sum_{n>=2} a^n / sqrt(log n) divided by |log(1-a)|^{-1/2} / (1-a).
double epsconversion_ratio(double a);

struct EpsilonImplied {
  double majorant = 0.0;    // sum_n F_norms[n] / lam^{n+1} (+ constant tail)
  double implied_eps = 0.0; // (lam - 1) majorant - 1
};

/// Neumann majorant of ||(lambda - F)^{-1}|| from the power norms; the list
/// is continued with its last value.
EpsilonImplied resolvent_epsilon_profile(const std::vector<double>& F_norms,
                                         double lam_abs);

} // namespace kreisslab
