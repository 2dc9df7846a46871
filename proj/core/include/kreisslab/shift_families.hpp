#pragma once

#include <span>
#include <string>
#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Matrix-weight family selector. The two strong-Kreiss variants differ only
/// in the off-diagonal scalar of the weight recursion:
///   cesaro:                    c * log(k/(k-1))
///   strong_kreiss_telescoping: c * log(log(k+2)/log(k+1))
///   strong_kreiss_literal:     c * log(log(k+2)/log(2))
enum class ShiftVariant { cesaro, strong_kreiss_telescoping, strong_kreiss_literal };

struct ShiftFamilySpec {
  ShiftVariant variant = ShiftVariant::cesaro;
  int m = 0;      // doubling depth, block size 2^m
  double c = 0.0; // weight scale

  void validate() const;
  int block_dim() const { return 1 << m; }
};

struct TruncationSpec {
  long long N = 2; // number of shift slots

  void validate(const ShiftFamilySpec& spec) const;
};

const char* variant_name(ShiftVariant v);

/// "cesaro:m=2,c=0.05,N=256" -> spec + truncation.
std::pair<ShiftFamilySpec, TruncationSpec> parse_shift_spec(const std::string& text);
std::string format_shift_spec(const ShiftFamilySpec& spec, const TruncationSpec& trunc);

/// Off-diagonal scalar of the weight recursion at index k (without c).
double weight_log_factor(ShiftVariant v, long long k);

/// The 2^m x 2^m unit upper-triangular weight block A_{m,k}(c), k >= 2.
CMatrix weight_matrix(const ShiftFamilySpec& spec, long long k);

/// (1, 2^m) entry of the ordered product of weight blocks for indices
/// 2..N. Running product of 2^m x 2^m blocks in extended precision; the full
/// truncated shift is never materialized.
double corner_entry(const ShiftFamilySpec& spec, long long N);

/// B_{p,n,j+1}(c): sum over k of log-factor(k) times the ordered product of
/// the remaining weight blocks in the window; 2^p x 2^p.
CMatrix block_B(const ShiftFamilySpec& spec, int p, long long n, long long j);

/// Dense compression of the weighted backward shift to N slots;
/// block-superdiagonal, nilpotent of index <= N.
CMatrix build_truncated_shift(const ShiftFamilySpec& spec, const TruncationSpec& trunc);

/// Dense compression of W_{p+1,n}(c): slot i receives B_{p,n,i} x_{i+n}.
CMatrix build_W_truncated(const ShiftFamilySpec& spec, int p, long long n,
                          const TruncationSpec& trunc);

CMatrix build_plain_shift(long long N, long long blockdim);

/// Backward shift with scalar weights w_k = (k/(k-1))^a, 0 < a < 1/2.
CMatrix build_muller_shift(long long N, double a);

CMatrix build_direct_sum(std::span<const CMatrix> blocks);

/// ||X^n|| computed exactly from the window products of weight blocks
/// (a power of a block-superdiagonal matrix is block-diagonal up to slot
/// relabeling, so its norm is the max block norm).
double shift_power_norm(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                        long long n);

/// ||X^n|| for all n = 1..N-1, by incremental window products.
std::vector<double> shift_power_norms(const ShiftFamilySpec& spec,
                                      const TruncationSpec& trunc);

/// Dense (zI - X)^{-1} by block back-substitution (no LU).
CMatrix shift_resolvent_dense(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                              cd z);

/// ||(zI - X)^{-1}|| by power iteration with vector-level back/forward
/// substitution; `warm` (optional) carries the singular direction across
/// nearby z. Never materializes the resolvent.
double shift_resolvent_norm(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                            cd z, CVector* warm = nullptr);

/// Right-hand side of the power decomposition: S^n plus the c-weighted
/// W-terms embedded by the coordinate index maps. Equals the dense X^n
/// exactly on the truncation.
CMatrix power_decomposition_rhs(const ShiftFamilySpec& spec, const TruncationSpec& trunc,
                                long long n);

} // namespace kreisslab
