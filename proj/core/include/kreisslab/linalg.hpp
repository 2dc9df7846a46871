#pragma once

#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Largest singular value. Full SVD up to dimension 512, power iteration on
/// A*A (1e-12 stagnation) above; relative accuracy ~1e-10 either way.
double op_norm(const CMatrix& a);

/// Power-iteration norm at any size, optionally warm-started by the caller
/// (pass a reused vector for sweeps over nearby matrices). Each iterate is a
/// true lower bound; iteration stops at 1e-12 stagnation.
double op_norm_iterative(const CMatrix& a, CVector* warm = nullptr);

/// (zI - A)^{-1} by partial-pivot LU; throws singularity_error (carrying z)
/// when a pivot falls below 1e-300.
CMatrix resolvent(const CMatrix& a, cd z);

/// Solves (zI - A) x = b without forming the inverse.
CVector resolvent_apply(const CMatrix& a, cd z, const CVector& b);

/// Smallest eigenvalue of the Hermitian part (H+H*)/2. The input must be
/// numerically self-adjoint: ||H - H*|| <= herm_tol * ||H||.
double min_eig_hermitian(const CMatrix& h, double herm_tol = 1e-10);

/// All eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd eig_hermitian(const CMatrix& h, double herm_tol = 1e-10);

/// Eigenvalues of a general square matrix (complex Schur).
std::vector<cd> eigenvalues(const CMatrix& a);

double spectral_radius(const CMatrix& a);

/// Horner evaluation p(A).
CMatrix poly_eval(const PolyCoeffs& p, const CMatrix& a);

cd poly_eval(const PolyCoeffs& p, cd z);

/// max over |z| = r of |p(z)|: 8192-point angular sampling plus
/// golden-section refinement of the best brackets.
double sup_on_circle(const PolyCoeffs& p, double r, int samples = 8192);

/// Haar-ish random unitary: QR of a seeded complex Gaussian matrix with the
/// R-diagonal phases absorbed into Q.
CMatrix random_unitary(Eigen::Index n, std::uint64_t seed);

} // namespace kreisslab
