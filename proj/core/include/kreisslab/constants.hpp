#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

enum class ConstantKind {
  kreiss,
  uniform_kreiss,
  strong_kreiss,
  cesaro,
  abs_cesaro,
  power_bound
};

const char* constant_kind_name(ConstantKind k);

/// Point (or point sequence) that attains the reported lower estimate.
struct Witness {
  enum class Type { point_z, n_lambda, n_vector, exponent };
  Type type = Type::point_z;
  cd z;            // point_z: resolvent sample
  long long n = 0; // n_lambda / n_vector / exponent
  cd lambda;       // n_lambda: unimodular twist
  CVector x;       // n_vector: unit vector fed to the power averages
};

struct SearchMeta {
  int radial_points = 0;
  int angle_points = 0;
  int lambda_points = 0;
  long long n_cap = 0;        // largest index examined
  bool truncated_sup = false; // stopping rule never certified, hit the cap
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string note;
};

/// A constant is reported as a certified-attained lower estimate plus, where
/// a certificate exists, an upper bound; never as a single "exact" number.
struct ConstantEstimate {
  ConstantKind kind = ConstantKind::kreiss;
  double lower_estimate = 0.0;
  std::optional<double> upper_bound;
  std::string upper_method;
  Witness witness;
  SearchMeta meta;
};

struct ConstantsOptions {
  long long n_max = 4096;  // hard cap on power/average indices
  long long k_max = 0;     // strong-Kreiss resolvent powers; 0 means 4*dim
  int radial_points = 13;  // radii 1 + 10^{-k} (R_out - 1)
  int angle_points = 512;
  int lambda_points = 1024;
  double tol = 1e-10;   // coordinate refinement tolerance
  double spectral_radius_tol = 1e-8;
  bool certify_upper = false; // kreiss: branch-and-bound upper bound
  double upper_tol = 1e-2;    // target slack of the certified upper bound
  std::uint64_t seed = 0;
  int ascent_starts = 8; // random sphere-ascent starts (abs_cesaro)
  std::vector<cd> extra_lambdas; // forced unimodular samples (uniform_kreiss)
};

ConstantEstimate kreiss_constant(const CMatrix& a, const ConstantsOptions& opts = {});
ConstantEstimate uniform_kreiss_constant(const CMatrix& a, const ConstantsOptions& opts = {});
ConstantEstimate strong_kreiss_constant(const CMatrix& a, const ConstantsOptions& opts = {});
ConstantEstimate cesaro_constant(const CMatrix& a, const ConstantsOptions& opts = {});
ConstantEstimate abs_cesaro_constant(const CMatrix& a, const ConstantsOptions& opts = {});
ConstantEstimate power_bound(const CMatrix& a, const ConstantsOptions& opts = {});

/// Re-evaluates the witness; reproduces lower_estimate to 1e-8 relative.
double evaluate_witness(const CMatrix& a, ConstantKind kind, const Witness& w);

/// (|z|-1) ||(zI-A)^{-1}||, the Kreiss objective at one point.
double kreiss_objective(const CMatrix& a, cd z);

/// ||M_n(lambda A)|| = ||(1/(n+1)) sum_k (lambda A)^k||.
double cesaro_mean_norm(const CMatrix& a, cd lambda, long long n);

/// f_n(x) = (1/n) sum_{j=1..n} ||A^j x|| on a unit vector.
double abs_cesaro_value(const CMatrix& a, long long n, const CVector& x);

std::string constant_estimate_to_json(const ConstantEstimate& est);

} // namespace kreisslab
