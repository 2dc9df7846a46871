#pragma once

#include <string>
#include <vector>

#include "kreisslab/cmatrix.hpp"
#include "kreisslab/vtype.hpp"

namespace kreisslab {

/// Per-angle record of the positivity decomposition
///   mu(sigma_n(theta), T) + (r_n / 2 pi) R_n(theta)^{-1} = P_n + D_n.
struct CurveDecompositionRow {
  double theta = 0.0;
  int case_label = 1; // 1: |theta| beyond the case angles, 2: [b_n,0], 3: [0,a_n]
  double R_n = 0.0;
  double psd_margin = 0.0; // min eigenvalue of P_n(theta)
  double psd_scale = 0.0;  // ||P_n(theta)||
  double D_norm = 0.0;     // ||D_n(theta)||, zero on cases 2 and 3
  double reassembly_residual = 0.0;
};

struct CurveDecomposition {
  long long n = 0;
  double r_n = 0.0;
  double a_n = 0.0, b_n = 0.0;
  std::vector<CurveDecompositionRow> rows;
  double min_psd_margin = 0.0;
  double min_psd_margin_rel = 0.0; // margin / scale at the worst angle
  double max_reassembly_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Counterclockwise double-layer potential at sigma(theta) = r e^{i theta}:
///   (r / 2 pi) (e^{i theta} (r e^{i theta} - T)^{-1} + adjoint).
/// Self-adjoint by construction; integrates p(sigma) to p(T) + p(0) I.
CMatrix mu_dlp(const CMatrix& T, double r, double theta);

/// || LHS - RHS || of the Poisson-type factorization for v - C = i R v',
/// |v'| = 1, both sides assembled independently.
double poisson_factorization_check(const CMatrix& T, cd v, cd C, double R);

/// Circle radii r_n = 1 + (1/2) nu_eff 2^{1-n}, nu_eff = nu - nu/(1+eps(nu));
/// strictly inside the outer-circle condition.
double circle_radius(const VTypeCurve& curve, const EpsilonProfile& eps, long long n);

CurveDecomposition decompose(const CMatrix& T, const VTypeCurve& curve,
                             const EpsilonProfile& eps, long long n, int grid_size);

struct KSpectralPerN {
  long long n = 0;
  double r_n = 0.0;
  double K_n = 0.0;
  double int_D = 0.0;      // integral of ||D_n(theta)||
  double int_lambda = 0.0; // integral of (r_n / 2 pi) R_n^{-1}
  double a_n = 0.0, b_n = 0.0;
  double min_psd_margin = 0.0;
  double max_reassembly_residual = 0.0;
};

struct KSpectralCertificate {
  double K = 0.0; // max over the computed n (stand-in for the limsup)
  std::vector<KSpectralPerN> per_n;
  std::vector<std::string> warnings;
};

/// K_n = 3 + 2 int ||D_n|| + 2 int lambda_n per circle; the certificate keeps
/// the whole sequence, no extrapolation is claimed.
KSpectralCertificate k_spectral_estimate(const CMatrix& T, const VTypeCurve& curve,
                                         const EpsilonProfile& eps,
                                         const std::vector<long long>& n_list,
                                         int grid_size);

/// max over seeded random polynomials (degree <= max_degree) of
/// ||p(T)|| / sup_{|z| = r_n} |p(z)|; the caller checks it against K.
double verify_k_spectral(const CMatrix& T, double K, double r_n, int trials,
                         std::uint64_t seed, int max_degree = 16);

struct QuadratureReport {
  double value = 0.0;
  bool converged = false;
};

/// int eps(r-1)/(r-1) ||(e^{i theta} - T)^{-1}||^2 d theta over the curve
/// support, with a 1e-10 notch at 0 when 1 is in the spectrum.
QuadratureReport hypothesis_integral(const CMatrix& T, const VTypeCurve& curve,
                                     const EpsilonProfile& eps);

/// Empirical circle constant: sup over the theta grid of
/// |theta| ||(e^{i theta} - T)^{-1}||.
double ritt_resolvent_check(const CMatrix& T, int grid_size = 2048);

/// Catalog operator with spectrum {1 - k/N} and a seeded similarity of
/// condition number cond confined to the eigenvalues <= 1/2; the peripheral
/// part stays normal so the epsilon-resolvent estimate survives on v-type
/// sets while the Kreiss constant still grows with cond.
CMatrix ritt_test(long long N, double cond, std::uint64_t seed);

std::string certificate_to_json(const KSpectralCertificate& cert);
std::string decomposition_to_csv(const CurveDecomposition& dec);

} // namespace kreisslab
