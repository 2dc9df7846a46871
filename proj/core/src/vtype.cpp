#include "kreisslab/vtype.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "kreisslab/errors.hpp"

namespace kreisslab {

namespace {
constexpr double kPi = 3.141592653589793;
}

VTypeCurve VTypeCurve::power_law(double beta, double p, double delta) {
  if (!(beta > 0.0)) throw input_error("VTypeCurve: require beta > 0");
  if (!(p > 0.0 && p < 1.0)) throw input_error("VTypeCurve: require 0 < p < 1");
  if (!(delta > 0.0 && delta < kPi)) throw input_error("VTypeCurve: require 0 < delta < pi");
  VTypeCurve c;
  c.profile_ = Profile::power_law;
  c.beta_ = beta;
  c.p_ = p;
  c.delta_minus_ = c.delta_plus_ = delta;
  c.end_r_ = 1.0 + beta * std::pow(delta, p);
  c.validate();
  return c;
}

VTypeCurve VTypeCurve::sampled(std::vector<double> thetas, std::vector<double> rs) {
  if (thetas.size() != rs.size() || thetas.size() < 3)
    throw input_error("VTypeCurve: sampled profile needs >= 3 matched points");
  for (std::size_t i = 1; i < thetas.size(); ++i)
    if (!(thetas[i] > thetas[i - 1]))
      throw input_error("VTypeCurve: sampled thetas must be strictly increasing");
  if (!(thetas.front() < 0.0 && thetas.back() > 0.0))
    throw input_error("VTypeCurve: sampled profile must straddle 0");
  VTypeCurve c;
  c.profile_ = Profile::sampled;
  c.delta_minus_ = -thetas.front();
  c.delta_plus_ = thetas.back();
  // equalize the two ends upward
  const double end = std::max(rs.front(), rs.back());
  rs.front() = rs.back() = end;
  c.end_r_ = end;
  c.thetas_ = std::move(thetas);
  c.rs_ = std::move(rs);
  c.validate();
  return c;
}

double VTypeCurve::r(double theta) const {
  if (theta > delta_plus_ || theta < -delta_minus_) return end_r_;
  if (profile_ == Profile::power_law)
    return 1.0 + beta_ * std::pow(std::abs(theta), p_);
  // piecewise linear interpolation
  auto it = std::upper_bound(thetas_.begin(), thetas_.end(), theta);
  if (it == thetas_.begin()) return rs_.front();
  if (it == thetas_.end()) return rs_.back();
  const std::size_t hi = static_cast<std::size_t>(it - thetas_.begin());
  const double t0 = thetas_[hi - 1], t1 = thetas_[hi];
  const double w = (theta - t0) / (t1 - t0);
  return rs_[hi - 1] * (1.0 - w) + rs_[hi] * w;
}

void VTypeCurve::validate() const {
  if (std::abs(r(0.0) - 1.0) > 1e-12)
    throw input_error("VTypeCurve: r(0) must equal 1");
  if (!(nu() > 0.0)) throw input_error("VTypeCurve: endpoints must exceed 1");
  const int grid = 10000;
  double prev_pos = r(0.0), prev_neg = r(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double tp = delta_plus_ * i / grid;
    const double tn = -delta_minus_ * i / grid;
    const double rp = r(tp), rn = r(tn);
    if (rp < prev_pos - 1e-14 || rn < prev_neg - 1e-14)
      throw input_error("VTypeCurve: profile must increase away from 0");
    prev_pos = rp;
    prev_neg = rn;
  }
}

EpsilonProfile EpsilonProfile::power(double eps0, double q, double nu0) {
  if (!(eps0 >= 0.0)) throw input_error("EpsilonProfile: require eps0 >= 0");
  if (!(q > 0.0)) throw input_error("EpsilonProfile: require q > 0");
  EpsilonProfile e;
  e.form_ = Form::power;
  e.eps0_ = eps0;
  e.q_ = q;
  e.nu0_ = nu0;
  return e;
}

EpsilonProfile EpsilonProfile::log_inv_sqrt(double C, double nu0) {
  if (!(C >= 0.0)) throw input_error("EpsilonProfile: require C >= 0");
  if (!(nu0 > 0.0 && nu0 < 1.0))
    throw input_error("EpsilonProfile: log_inv_sqrt needs nu0 in (0,1)");
  EpsilonProfile e;
  e.form_ = Form::log_inv_sqrt;
  e.c_ = C;
  e.nu0_ = nu0;
  return e;
}

EpsilonProfile EpsilonProfile::tabulated(std::vector<double> xs, std::vector<double> vals) {
  if (xs.size() != vals.size() || xs.size() < 2)
    throw input_error("EpsilonProfile: tabulated needs >= 2 matched points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]) || vals[i] < vals[i - 1])
      throw input_error("EpsilonProfile: tabulated profile must increase");
  if (!(xs.front() >= 0.0) || vals.front() < 0.0)
    throw input_error("EpsilonProfile: tabulated domain must start at x >= 0");
  EpsilonProfile e;
  e.form_ = Form::tabulated;
  e.nu0_ = xs.back();
  e.xs_ = std::move(xs);
  e.vals_ = std::move(vals);
  return e;
}

double EpsilonProfile::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  switch (form_) {
    case Form::power:
      return eps0_ * std::pow(x, q_);
    case Form::log_inv_sqrt: {
      if (x >= 1.0) throw input_error("EpsilonProfile: log_inv_sqrt needs x < 1");
      return c_ / std::sqrt(std::log(1.0 / x));
    }
    case Form::tabulated: {
      if (x <= xs_.front()) return vals_.front() * (x / std::max(xs_.front(), 1e-300));
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return vals_.back();
      const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      const double w = (x - xs_[hi - 1]) / (xs_[hi] - xs_[hi - 1]);
      return vals_[hi - 1] * (1.0 - w) + vals_[hi] * w;
    }
  }
  return 0.0;
}

void EpsilonProfile::validate() const {
  double prev = -1.0;
  for (int k = 12; k >= 1; --k) {
    const double x = std::min(std::pow(10.0, -k), nu0_);
    const double v = (*this)(x);
    if (v < prev - 1e-14) throw input_error("EpsilonProfile: must be increasing");
    prev = v;
  }
  // vanishing trend at 0+: the deepest probe must have lost at least half of
  // the shallowest probe's value (slow profiles like (log 1/x)^{-1/2} still
  // qualify; identically-zero profiles pass trivially)
  const double shallow = (*this)(std::min(0.1, nu0_));
  const double deep = (*this)(std::min(1e-12, nu0_));
  if (shallow > 0.0 && deep > 0.5 * shallow + 1e-14)
    throw input_error("EpsilonProfile: eps(0+) does not vanish");
}

namespace {

// integral of f over [lo, hi] with an integrable singularity at lo: dyadic
// shells toward lo, 8-point Gauss-Legendre on each, tail-trend divergence
// detection
struct ShellQuad {
  double value = 0.0;
  bool converged = false;
};

double gauss8(const std::function<double(double)>& f, double a, double b) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                               0.7966664774136267, 0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    s += ws[i] * (f(c + h * xs[i]) + f(c - h * xs[i]));
  return s * h;
}

ShellQuad shell_quad_toward(const std::function<double(double)>& f, double lo, double hi,
                            double tol, int max_levels = 200) {
  ShellQuad out;
  if (hi <= lo) {
    out.converged = true;
    return out;
  }
  double total = 0.0;
  double width = hi - lo;
  double shell_hi = hi;
  double prev_term = -1.0;
  int flat = 0;
  for (int level = 0; level < max_levels; ++level) {
    const double shell_lo = lo + width * 0.5;
    const double term = gauss8(f, shell_lo, shell_hi);
    total += term;
    if (prev_term >= 0.0 && term >= prev_term * 0.999) ++flat; else flat = 0;
    if (flat >= 8) return out; // shells not decaying: divergent
    if (term < tol && level > 4) {
      out.value = total + term; // one-term tail cushion
      out.converged = true;
      return out;
    }
    prev_term = term;
    shell_hi = shell_lo;
    width *= 0.5;
  }
  out.value = total;
  out.converged = prev_term < tol * 16;
  return out;
}

} // namespace

AdmissibilityReport vtype_admissibility(const VTypeCurve& curve) {
  AdmissibilityReport rep;
  auto f = [&](double th) { return 1.0 / (curve.r(th) - 1.0); };
  const ShellQuad pos = shell_quad_toward(f, 0.0, curve.delta_plus(), 1e-9);
  const ShellQuad neg =
      shell_quad_toward([&](double th) { return f(-th); }, 0.0, curve.delta_minus(), 1e-9);
  if (!pos.converged || !neg.converged)
    throw admissibility_error("vtype_admissibility: integral of 1/(r-1) does not converge");
  rep.integral = pos.value + neg.value;
  rep.integral_converged = true;
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (int k = 2; k <= 12; ++k) {
    const double th = std::pow(10.0, -k);
    if (th > curve.delta_plus()) continue;
    const double probe = th / (curve.r(th) - 1.0);
    rep.pinch_probe_max = std::max(rep.pinch_probe_max, probe);
    if (probe > prev + 1e-14) decreasing = false;
    prev = probe;
  }
  rep.pinch_vanishes = decreasing && prev < 1e-2;
  return rep;
}

double case_boundary_function(const VTypeCurve& curve, const EpsilonProfile& eps,
                              double r_n, double theta) {
  const double r = curve.r(theta);
  const double x = r - 1.0;
  return r - r_n - x / (1.0 + eps(x));
}

CaseAngles solve_angles(const VTypeCurve& curve, const EpsilonProfile& eps, double r_n) {
  const double nu = curve.nu();
  if (!(r_n > 1.0))
    throw precondition_error("solve_angles: require r_n > 1");
  if (!(r_n < 1.0 + nu - nu / (1.0 + eps(nu))))
    throw precondition_error("solve_angles: r_n violates the outer-circle condition");
  auto g = [&](double th) { return case_boundary_function(curve, eps, r_n, th); };

  auto bisect = [&](double lo, double hi) {
    // g(lo) <= 0 < g(hi) or vice versa; returns the root
    double flo = g(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = g(mid);
      if ((fm <= 0.0) == (flo <= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      if (hi - lo <= 1e-12) break;
    }
    return 0.5 * (lo + hi);
  };

  const int grid = 2048;
  CaseAngles out;
  // largest root on [0, pi]: scan downward from pi for the first sign change
  {
    double hi = kPi, fhi = g(kPi);
    if (!(fhi > 0.0))
      throw precondition_error("solve_angles: G_n(pi) must be positive");
    bool found = false;
    for (int i = 1; i <= grid; ++i) {
      const double lo = kPi * (grid - i) / grid;
      const double flo = g(lo);
      if (flo <= 0.0) {
        out.a_n = bisect(lo, hi);
        found = true;
        break;
      }
      hi = lo;
      fhi = flo;
    }
    if (!found) throw precondition_error("solve_angles: no root of G_n in [0, pi]");
  }
  // smallest root on [-pi, 0]: scan upward from -pi
  {
    double lo = -kPi, flo = g(-kPi);
    if (!(flo > 0.0))
      throw precondition_error("solve_angles: G_n(-pi) must be positive");
    bool found = false;
    for (int i = 1; i <= grid; ++i) {
      const double hi = -kPi * (grid - i) / grid;
      const double fhi = g(hi);
      if (fhi <= 0.0) {
        out.b_n = bisect(lo, hi);
        found = true;
        break;
      }
      lo = hi;
      flo = fhi;
    }
    if (!found) throw precondition_error("solve_angles: no root of G_n in [-pi, 0]");
  }
  return out;
}

} // namespace kreisslab
