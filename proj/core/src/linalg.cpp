#include "kreisslab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

#include "kreisslab/rng.hpp"

namespace kreisslab {

namespace {

// power iteration on A*A; every Rayleigh value is a valid lower bound and the
// stagnation threshold keeps the relative error far below what callers need
double op_norm_power_iteration(const CMatrix& a) {
  const Eigen::Index n = a.cols();
  Rng rng(0x5eed);
  CVector v = rng.gaussian_vector(n);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 2000; ++it) {
    CVector w = a * v;
    CVector u = a.adjoint() * w;
    const double nu = u.norm();
    if (nu == 0.0) return 0.0;
    const double sigma_new = std::sqrt(w.squaredNorm() / 1.0);
    u /= nu;
    const double delta = std::abs(sigma_new - sigma);
    v = u;
    sigma = sigma_new;
    if (it > 4 && delta <= 1e-12 * std::max(1.0, sigma)) break;
  }
  return sigma;
}

} // namespace

double op_norm(const CMatrix& a) {
  require_finite(a, "op_norm");
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 512) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
  }
  return op_norm_power_iteration(a);
}

double op_norm_iterative(const CMatrix& a, CVector* warm) {
  if (a.size() == 0) return 0.0;
  CVector local;
  CVector& v = warm ? *warm : local;
  if (v.size() != a.cols()) {
    Rng rng(0x90a7);
    v = rng.gaussian_vector(a.cols());
    v.normalize();
  }
  double sigma = 0.0;
  for (int it = 0; it < 2000; ++it) {
    CVector w = a * v;
    const double s = w.norm();
    if (s == 0.0) return 0.0;
    CVector u = a.adjoint() * w;
    const double nu = u.norm();
    if (nu == 0.0) return s;
    v = u / nu;
    const bool done = it > 0 && std::abs(s - sigma) <= 1e-12 * std::max(1.0, s);
    sigma = s;
    if (done) break;
  }
  return sigma;
}

CMatrix resolvent(const CMatrix& a, cd z) {
  require_finite(a, "resolvent");
  require_square(a, "resolvent");
  const Eigen::Index n = a.rows();
  CMatrix m = -a;
  m.diagonal().array() += z;
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot_min > 1e-300))
    throw singularity_error("resolvent: zI - A numerically singular", z);
  return lu.solve(CMatrix::Identity(n, n));
}

CVector resolvent_apply(const CMatrix& a, cd z, const CVector& b) {
  CMatrix m = -a;
  m.diagonal().array() += z;
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot_min > 1e-300))
    throw singularity_error("resolvent_apply: zI - A numerically singular", z);
  return lu.solve(b);
}

Eigen::VectorXd eig_hermitian(const CMatrix& h, double herm_tol) {
  require_finite(h, "eig_hermitian");
  require_square(h, "eig_hermitian");
  const double scale = op_norm(h);
  const double asym = (h - h.adjoint()).norm();
  if (asym > herm_tol * std::max(scale, 1e-300) && asym > 0.0)
    throw input_error("eig_hermitian: input is not numerically self-adjoint");
  CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eig_hermitian(const CMatrix& h, double herm_tol) {
  return eig_hermitian(h, herm_tol)(0);
}

std::vector<cd> eigenvalues(const CMatrix& a) {
  require_finite(a, "eigenvalues");
  require_square(a, "eigenvalues");
  Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/false);
  std::vector<cd> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

double spectral_radius(const CMatrix& a) {
  double r = 0.0;
  for (cd ev : eigenvalues(a)) r = std::max(r, std::abs(ev));
  return r;
}

CMatrix poly_eval(const PolyCoeffs& p, const CMatrix& a) {
  require_square(a, "poly_eval");
  require_finite(a, "poly_eval");
  const Eigen::Index n = a.rows();
  const auto& c = p.coeff;
  CMatrix acc = CMatrix::Zero(n, n);
  acc.diagonal().array() += c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc = (acc * a).eval();
    acc.diagonal().array() += c[k];
  }
  return acc;
}

cd poly_eval(const PolyCoeffs& p, cd z) {
  cd acc = p.coeff.back();
  for (std::size_t k = p.coeff.size() - 1; k-- > 0;) acc = acc * z + p.coeff[k];
  return acc;
}

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

} // namespace

double sup_on_circle(const PolyCoeffs& p, double r, int samples) {
  if (!(r > 0.0)) throw input_error("sup_on_circle: radius must be positive");
  const double two_pi = 6.283185307179586;
  auto val = [&](double theta) {
    return std::abs(poly_eval(p, r * cd(std::cos(theta), std::sin(theta))));
  };
  std::vector<double> v(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    v[static_cast<std::size_t>(i)] = val(two_pi * i / samples);
  // refine around every local maximum of the sampled sequence
  double best = 0.0;
  const double h = two_pi / samples;
  for (int i = 0; i < samples; ++i) {
    const double here = v[static_cast<std::size_t>(i)];
    const double prev = v[static_cast<std::size_t>((i + samples - 1) % samples)];
    const double next = v[static_cast<std::size_t>((i + 1) % samples)];
    best = std::max(best, here);
    if (here >= prev && here >= next) {
      const double t = two_pi * i / samples;
      best = std::max(best, golden_max(val, t - h, t + h, 1e-12));
    }
  }
  return best;
}

CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cd d = r(j, j);
    const double m = std::abs(d);
    q.col(j) *= (m > 0 ? d / m : cd(1, 0));
  }
  return q;
}

} // namespace kreisslab
