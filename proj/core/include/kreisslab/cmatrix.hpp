#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kreisslab/errors.hpp"

namespace kreisslab {

using cd = std::complex<double>;

/// Dense complex matrix, the universal operator carrier of the toolkit.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Polynomial p(z) = sum_k coeff[k] z^k. The leading coefficient may be
/// zero; degree() is informational.
struct PolyCoeffs {
  std::vector<cd> coeff;

  PolyCoeffs() = default;
  explicit PolyCoeffs(std::vector<cd> c) : coeff(std::move(c)) {
    if (coeff.empty()) throw input_error("PolyCoeffs: empty coefficient list");
  }

  std::size_t degree() const { return coeff.size() - 1; }
};

inline bool all_finite(const CMatrix& a) {
  return a.array().isFinite().all();
}

inline void require_finite(const CMatrix& a, const char* who) {
  if (!all_finite(a))
    throw input_error(std::string(who) + ": matrix has non-finite entries");
}

inline void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw input_error(std::string(who) + ": matrix must be square");
}

} // namespace kreisslab
