#pragma once

#include <string>
#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Radial profile r(theta) >= 1 pinched to 1 at theta = 0, strictly monotone
/// away from 0 on [-delta_minus, delta_plus], with integrable 1/(r-1).
/// Outside its angular support the profile continues as a constant, so r is
/// defined on all of [-pi, pi].
class VTypeCurve {
public:
  enum class Profile { power_law, sampled };

  /// r(theta) = 1 + beta |theta|^p on [-delta, delta]; requires 0 < p < 1.
  static VTypeCurve power_law(double beta, double p, double delta = 1.0);

  /// Piecewise-linear profile through the sampled points (theta_i, r_i);
  /// thetas strictly increasing, must straddle 0 with r(0) = 1. The two end
  /// values are equalized (raised to their max).
  static VTypeCurve sampled(std::vector<double> thetas, std::vector<double> rs);

  double r(double theta) const;
  double delta_minus() const { return delta_minus_; }
  double delta_plus() const { return delta_plus_; }
  /// Height of the constant extension: nu = r(pi) - 1 = r(delta_plus) - 1.
  double nu() const { return end_r_ - 1.0; }
  Profile profile() const { return profile_; }
  double beta() const { return beta_; }
  double p() const { return p_; }

  /// Monotonicity / endpoint invariants on a 10^4-point grid.
  void validate() const;

private:
  VTypeCurve() = default;
  Profile profile_ = Profile::power_law;
  double beta_ = 1.0, p_ = 0.5;
  double delta_minus_ = 1.0, delta_plus_ = 1.0;
  double end_r_ = 2.0;
  std::vector<double> thetas_, rs_;
};

/// epsilon(x): continuous increasing with epsilon(0+) = 0 on (0, nu0].
class EpsilonProfile {
public:
  enum class Form { power, log_inv_sqrt, tabulated };

  /// eps0 * x^q, q > 0.
  static EpsilonProfile power(double eps0, double q, double nu0 = 16.0);
  /// C * (log(1/x))^{-1/2}; only meaningful for x < 1, so nu0 < 1 required.
  static EpsilonProfile log_inv_sqrt(double C, double nu0 = 0.5);
  /// Piecewise-linear through (x_i, v_i), x increasing, v increasing from 0.
  static EpsilonProfile tabulated(std::vector<double> xs, std::vector<double> vals);

  double operator()(double x) const;
  double nu0() const { return nu0_; }
  Form form() const { return form_; }

  /// Numeric check that eps is increasing and vanishes at 0+ (x = 10^-k).
  void validate() const;

private:
  EpsilonProfile() = default;
  Form form_ = Form::power;
  double eps0_ = 0.0, q_ = 1.0, c_ = 0.0, nu0_ = 1.0;
  std::vector<double> xs_, vals_;
};

struct AdmissibilityReport {
  double integral = 0.0;      // int d(theta) / (r - 1) over the support
  bool integral_converged = false;
  double pinch_probe_max = 0.0; // max over theta = 10^-k of |theta|/(r-1)
  bool pinch_vanishes = false;  // probe sequence decreasing to ~0
};

/// Quadrature of 1/(r-1) on a mesh graded into the pinch plus the
/// limsup probe; throws admissibility_error when refinement diverges.
AdmissibilityReport vtype_admissibility(const VTypeCurve& curve);

struct CaseAngles {
  double a_n = 0.0; // largest root in [0, pi]
  double b_n = 0.0; // smallest root in [-pi, 0]
};

/// Roots of G_n(theta) = r(theta) - r_n - (r(theta)-1)/(1+eps(r(theta)-1)):
/// downward grid scan (2048 points) bracketing, then bisection to 1e-12.
CaseAngles solve_angles(const VTypeCurve& curve, const EpsilonProfile& eps, double r_n);

/// G_n itself, exposed for residual checks.
double case_boundary_function(const VTypeCurve& curve, const EpsilonProfile& eps,
                              double r_n, double theta);

} // namespace kreisslab
