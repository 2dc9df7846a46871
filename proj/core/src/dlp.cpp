#include "kreisslab/dlp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "kreisslab/json_writer.hpp"
#include "kreisslab/linalg.hpp"
#include "kreisslab/parallel.hpp"
#include "kreisslab/rng.hpp"

namespace kreisslab {

namespace {
constexpr double kPi = 3.141592653589793;

cd unit(double theta) { return cd(std::cos(theta), std::sin(theta)); }
} // namespace

CMatrix mu_dlp(const CMatrix& T, double r, double theta) {
  require_square(T, "mu_dlp");
  if (!(r > spectral_radius(T)))
    throw precondition_error("mu_dlp: radius must exceed the spectral radius");
  const cd e = unit(theta);
  const CMatrix res = resolvent(T, r * e);
  const CMatrix z = e * res;
  return (r / (2.0 * kPi)) * (z + z.adjoint());
}

double poisson_factorization_check(const CMatrix& T, cd v, cd C, double R) {
  require_square(T, "poisson_factorization_check");
  if (!(R > 0.0)) throw input_error("poisson_factorization_check: require R > 0");
  const cd vp = (v - C) / (cd(0, 1) * R);
  if (std::abs(std::abs(vp) - 1.0) > 1e-10)
    throw input_error("poisson_factorization_check: v - C = iRv' needs |v'| = 1");
  const Eigen::Index d = T.rows();
  const CMatrix I = CMatrix::Identity(d, d);

  const CMatrix rv = resolvent(T, v);            // (vI - T)^{-1}
  const CMatrix rv_adj = rv.adjoint();           // (conj(v) I - T*)^{-1}
  const CMatrix lhs =
      (vp * rv - std::conj(vp) * rv_adj) / cd(0, 1) + (1.0 / R) * I;

  const CMatrix B = T - C * I;
  Eigen::PartialPivLU<CMatrix> lu(B);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 1e-300))
    throw singularity_error("poisson_factorization_check: T - C singular", C);
  const CMatrix Binv = lu.solve(I);
  const CMatrix middle = (1.0 / (R * R)) * I - Binv * Binv.adjoint();
  const CMatrix rhs = R * rv * B * middle * B.adjoint() * rv.adjoint();

  return op_norm(lhs - rhs);
}

double circle_radius(const VTypeCurve& curve, const EpsilonProfile& eps, long long n) {
  if (n < 1) throw input_error("circle_radius: require n >= 1");
  const double nu = curve.nu();
  const double nu_eff = nu - nu / (1.0 + eps(nu));
  return 1.0 + 0.5 * nu_eff * std::pow(2.0, 1.0 - static_cast<double>(n));
}

namespace {

struct AngleWork {
  CurveDecompositionRow row;
  double hypothesis_ratio = 0.0; // ||(T - C)^{-1}|| (r_C - 1) / (1 + eps(r_C - 1))
  double theta_of_ratio = 0.0;
};

AngleWork decompose_angle(const CMatrix& T, const VTypeCurve& curve,
                          const EpsilonProfile& eps, double r_n, double a_n, double b_n,
                          double theta) {
  AngleWork work;
  CurveDecompositionRow& row = work.row;
  row.theta = theta;
  double rho_c;
  if (theta >= b_n && theta < 0.0) {
    row.case_label = 2;
    rho_c = curve.r(b_n);
  } else if (theta >= 0.0 && theta <= a_n) {
    row.case_label = 3;
    rho_c = curve.r(a_n);
  } else {
    row.case_label = 1;
    rho_c = curve.r(theta);
  }
  row.R_n = rho_c - r_n;
  if (!(row.R_n > 0.0))
    throw precondition_error("decompose: nonpositive R_n, circle outside the curve");

  const Eigen::Index d = T.rows();
  const cd e = unit(theta);
  const cd c_point = rho_c * e;

  CMatrix a1 = -T;
  a1.diagonal().array() += r_n * e; // A = r_n e^{i theta} I - T
  Eigen::PartialPivLU<CMatrix> lu_a(a1);
  if (!(lu_a.matrixLU().diagonal().cwiseAbs().minCoeff() > 1e-300))
    throw singularity_error("decompose: circle point hits the spectrum", r_n * e);
  CMatrix b1 = T;
  b1.diagonal().array() -= c_point; // B = T - C
  const CMatrix m1 = lu_a.solve(b1);                      // A^{-1} B
  const CMatrix m2 = lu_a.solve(CMatrix::Identity(d, d)); // A^{-1}
  const CMatrix m1m1 = m1 * m1.adjoint();
  const CMatrix m2m2 = m2 * m2.adjoint();

  const double x = rho_c - 1.0;
  const double q = (1.0 + eps(x)) / x;
  const double factor = r_n * row.R_n / (2.0 * kPi);
  // case 1 uses the epsilon bracket; cases 2/3 have q = 1/R_n by the
  // definition of the case angles, so D vanishes there
  const double s = row.case_label == 1 ? q * q : 1.0 / (row.R_n * row.R_n);
  const CMatrix p = factor * (s * m1m1 - m2m2);
  row.psd_margin = min_eig_hermitian(p, 1e-8);
  row.psd_scale = op_norm(p);
  CMatrix dmat = CMatrix::Zero(d, d);
  if (row.case_label == 1) {
    dmat = factor * (1.0 / (row.R_n * row.R_n) - q * q) * m1m1;
    row.D_norm = op_norm(dmat);
  }

  const CMatrix mu = mu_dlp(T, r_n, theta);
  const double lambda_n = r_n / (2.0 * kPi * row.R_n);
  CMatrix residual = mu - p - dmat;
  residual.diagonal().array() += lambda_n;
  row.reassembly_residual = op_norm(residual);

  // sampled check of the epsilon-resolvent hypothesis at the case point
  Eigen::JacobiSVD<CMatrix> svd(b1);
  const double smin = svd.singularValues()(d - 1);
  work.hypothesis_ratio = smin > 0.0 ? (1.0 / smin) / q : std::numeric_limits<double>::infinity();
  work.theta_of_ratio = theta;
  return work;
}

} // namespace

CurveDecomposition decompose(const CMatrix& T, const VTypeCurve& curve,
                             const EpsilonProfile& eps, long long n, int grid_size) {
  require_square(T, "decompose");
  require_finite(T, "decompose");
  if (grid_size < 8) throw input_error("decompose: grid too small");
  if (spectral_radius(T) > 1.0 + 1e-9)
    throw precondition_error("decompose: spectral radius must be <= 1");
  for (cd ev : eigenvalues(T))
    if (std::abs(ev) > 1.0 - 1e-9 && std::abs(ev - cd(1, 0)) > 1e-7)
      throw precondition_error("decompose: spectrum must lie in the open disk union {1}");
  if (eps.nu0() < curve.nu() - 1e-12)
    throw precondition_error("decompose: epsilon profile domain smaller than the curve height");

  CurveDecomposition out;
  out.n = n;
  out.r_n = circle_radius(curve, eps, n);
  const CaseAngles angles = solve_angles(curve, eps, out.r_n);
  out.a_n = angles.a_n;
  out.b_n = angles.b_n;

  out.rows.resize(static_cast<std::size_t>(grid_size));
  std::vector<AngleWork> work(static_cast<std::size_t>(grid_size));
  parallel_for(static_cast<std::size_t>(grid_size), [&](std::size_t i) {
    const double theta = -kPi + (static_cast<double>(i) + 0.5) * 2.0 * kPi / grid_size;
    work[i] = decompose_angle(T, curve, eps, out.r_n, out.a_n, out.b_n, theta);
  });

  out.min_psd_margin = std::numeric_limits<double>::infinity();
  double worst_rel = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0, worst_ratio_theta = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    out.rows[i] = work[i].row;
    out.min_psd_margin = std::min(out.min_psd_margin, out.rows[i].psd_margin);
    if (out.rows[i].psd_scale > 0.0)
      worst_rel = std::min(worst_rel, out.rows[i].psd_margin / out.rows[i].psd_scale);
    out.max_reassembly_residual =
        std::max(out.max_reassembly_residual, out.rows[i].reassembly_residual);
    if (work[i].hypothesis_ratio > worst_ratio) {
      worst_ratio = work[i].hypothesis_ratio;
      worst_ratio_theta = work[i].theta_of_ratio;
    }
  }
  out.min_psd_margin_rel = worst_rel;
  if (worst_ratio > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "epsilon-resolvent estimate violated on the sampled set: ratio "
       << worst_ratio << " at theta " << worst_ratio_theta << " (n = " << n << ")";
    out.warnings.push_back(os.str());
  }
  return out;
}

KSpectralCertificate k_spectral_estimate(const CMatrix& T, const VTypeCurve& curve,
                                         const EpsilonProfile& eps,
                                         const std::vector<long long>& n_list,
                                         int grid_size) {
  KSpectralCertificate cert;
  const double dtheta = 2.0 * kPi / grid_size;
  for (long long n : n_list) {
    CurveDecomposition dec = decompose(T, curve, eps, n, grid_size);
    KSpectralPerN per;
    per.n = n;
    per.r_n = dec.r_n;
    per.a_n = dec.a_n;
    per.b_n = dec.b_n;
    per.min_psd_margin = dec.min_psd_margin;
    per.max_reassembly_residual = dec.max_reassembly_residual;
    std::vector<double> dvals, lvals;
    dvals.reserve(dec.rows.size());
    lvals.reserve(dec.rows.size());
    for (const auto& row : dec.rows) {
      dvals.push_back(row.D_norm);
      lvals.push_back(dec.r_n / (2.0 * kPi * row.R_n));
    }
    per.int_D = dtheta * pairwise_sum(dvals);
    per.int_lambda = dtheta * pairwise_sum(lvals);
    per.K_n = 3.0 + 2.0 * per.int_D + 2.0 * per.int_lambda;
    cert.K = std::max(cert.K, per.K_n);
    for (auto& wmsg : dec.warnings) cert.warnings.push_back(wmsg);
    cert.per_n.push_back(per);
  }
  return cert;
}

double verify_k_spectral(const CMatrix& T, double K, double r_n, int trials,
                         std::uint64_t seed, int max_degree) {
  require_square(T, "verify_k_spectral");
  if (!(K > 0.0) || !(r_n > 0.0))
    throw input_error("verify_k_spectral: require K > 0 and r_n > 0");
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int deg = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_degree)));
    std::vector<cd> coeff(static_cast<std::size_t>(deg) + 1);
    for (auto& c : coeff) c = rng.cnormal();
    const PolyCoeffs p(coeff);
    const double num = op_norm(poly_eval(p, T));
    const double den = sup_on_circle(p, r_n);
    if (den > 0.0) worst = std::max(worst, num / den);
  }
  return worst;
}

QuadratureReport hypothesis_integral(const CMatrix& T, const VTypeCurve& curve,
                                     const EpsilonProfile& eps) {
  require_square(T, "hypothesis_integral");
  bool unit_eig = false;
  for (cd ev : eigenvalues(T)) {
    if (std::abs(ev) > 1.0 - 1e-9) {
      if (std::abs(ev - cd(1, 0)) > 1e-7)
        throw precondition_error(
            "hypothesis_integral: peripheral spectrum away from 1");
      unit_eig = true;
    }
  }
  const double notch = unit_eig ? 1e-10 : 0.0;
  auto integrand = [&](double th) {
    const double x = curve.r(th) - 1.0;
    if (x <= 0.0) return 0.0;
    const double rn = op_norm(resolvent(T, unit(th)));
    return eps(x) / x * rn * rn;
  };

  // dyadic shells toward the pinch from both sides
  QuadratureReport rep;
  double total = 0.0;
  bool converged = true;
  for (int side = 0; side < 2; ++side) {
    const double delta = side == 0 ? curve.delta_plus() : curve.delta_minus();
    auto f = side == 0 ? std::function<double(double)>(integrand)
                       : std::function<double(double)>([&](double th) { return integrand(-th); });
    double hi = delta;
    double prev = -1.0;
    int flat = 0;
    bool side_done = false;
    for (int level = 0; level < 200; ++level) {
      double lo = hi * 0.5;
      if (lo <= notch) lo = notch;
      // 8-point Gauss on [lo, hi]
      static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                   0.7966664774136267, 0.9602898564975363};
      static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      double term = 0.0;
      for (int i = 0; i < 4; ++i) term += ws[i] * (f(c + h * xs[i]) + f(c - h * xs[i]));
      term *= h;
      total += term;
      if (lo <= notch) {
        // reached the notch; convergence judged by the last shells' trend
        side_done = prev >= 0.0 && term <= prev;
        break;
      }
      if (prev >= 0.0 && term >= prev * 0.999) ++flat; else flat = 0;
      if (flat >= 8) { side_done = false; break; }
      if (term < 1e-10 && level > 4) { side_done = true; break; }
      prev = term;
      hi = lo;
    }
    converged = converged && side_done;
  }
  rep.value = total;
  rep.converged = converged;
  return rep;
}

double ritt_resolvent_check(const CMatrix& T, int grid_size) {
  require_square(T, "ritt_resolvent_check");
  double sup = 0.0;
  std::vector<double> vals(static_cast<std::size_t>(grid_size), 0.0);
  parallel_for(static_cast<std::size_t>(grid_size), [&](std::size_t i) {
    const double th = -kPi + (static_cast<double>(i) + 0.5) * 2.0 * kPi / grid_size;
    vals[i] = std::abs(th) * op_norm(resolvent(T, unit(th)));
  });
  for (double v : vals) sup = std::max(sup, v);
  return sup;
}

CMatrix ritt_test(long long N, double cond, std::uint64_t seed) {
  if (N < 2) throw input_error("ritt_test: require N >= 2");
  if (!(cond >= 1.0)) throw input_error("ritt_test: require cond >= 1");
  Eigen::VectorXd eigs(N);
  for (long long k = 0; k < N; ++k)
    eigs(k) = 1.0 - static_cast<double>(k) / static_cast<double>(N);
  // nonnormality lives on the eigenvalues <= 1/2; the peripheral part stays
  // orthogonal so resolvent growth near 1 keeps the constant-1 profile
  long long deep_start = N;
  for (long long k = 0; k < N; ++k)
    if (eigs(k) <= 0.5) { deep_start = k; break; }
  const long long deep = N - deep_start;
  CMatrix v = CMatrix::Identity(N, N);
  CMatrix vinv = CMatrix::Identity(N, N);
  if (deep >= 2 && cond > 1.0) {
    const CMatrix u1 = random_unitary(deep, seed * 2654435761u + 1);
    const CMatrix u2 = random_unitary(deep, seed * 2654435761u + 2);
    Eigen::VectorXd sv(deep);
    for (long long i = 0; i < deep; ++i)
      sv(i) = std::pow(cond, 1.0 - static_cast<double>(i) /
                                       std::max<long long>(1, deep - 1));
    const CMatrix vb = u1 * sv.asDiagonal() * u2.adjoint();
    const CMatrix vbinv = u2 * sv.cwiseInverse().asDiagonal() * u1.adjoint();
    v.block(deep_start, deep_start, deep, deep) = vb;
    vinv.block(deep_start, deep_start, deep, deep) = vbinv;
  }
  return v * eigs.cast<cd>().asDiagonal() * vinv;
}

std::string certificate_to_json(const KSpectralCertificate& cert) {
  JsonWriter w;
  w.begin_object();
  w.kv("K", cert.K);
  w.key("per_n").begin_array();
  for (const auto& per : cert.per_n) {
    w.begin_object();
    w.kv("n", per.n);
    w.kv("r_n", per.r_n);
    w.kv("K_n", per.K_n);
    w.kv("int_D", per.int_D);
    w.kv("int_lambda", per.int_lambda);
    w.kv("a_n", per.a_n);
    w.kv("b_n", per.b_n);
    w.kv("min_psd_margin", per.min_psd_margin);
    w.kv("max_reassembly_residual", per.max_reassembly_residual);
    w.end_object();
  }
  w.end_array();
  w.key("warnings").begin_array();
  for (const auto& msg : cert.warnings) w.value(msg);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string decomposition_to_csv(const CurveDecomposition& dec) {
  std::ostringstream os;
  os << "theta,case,Rn,psd_margin,D_norm\n";
  for (const auto& row : dec.rows)
    os << JsonWriter::number(row.theta) << ',' << row.case_label << ','
       << JsonWriter::number(row.R_n) << ',' << JsonWriter::number(row.psd_margin)
       << ',' << JsonWriter::number(row.D_norm) << '\n';
  return os.str();
}

} // namespace kreisslab
