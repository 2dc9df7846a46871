#pragma once

#include <vector>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Compressed-sparse-row copy of a dense matrix. The estimators walk long
/// power sequences; shift-structured inputs are a few nonzeros per row and
/// this keeps those walks linear instead of quadratic.
struct Csr {
  Eigen::Index rows = 0, cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<cd> val;

  explicit Csr(const CMatrix& a, double drop_tol = 0.0) {
    rows = a.rows();
    cols = a.cols();
    row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j)
        if (std::abs(a(i, j)) > drop_tol) {
          col.push_back(static_cast<int>(j));
          val.push_back(a(i, j));
        }
      row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col.size());
    }
  }

  std::size_t nnz() const { return val.size(); }

  CVector apply(const CVector& x) const {
    CVector y = CVector::Zero(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      cd s(0, 0);
      for (int k = row_ptr[static_cast<std::size_t>(i)];
           k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        s += val[static_cast<std::size_t>(k)] * x(col[static_cast<std::size_t>(k)]);
      y(i) = s;
    }
    return y;
  }

  CVector apply_adjoint(const CVector& x) const {
    CVector y = CVector::Zero(cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (int k = row_ptr[static_cast<std::size_t>(i)];
           k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        y(col[static_cast<std::size_t>(k)]) +=
            std::conj(val[static_cast<std::size_t>(k)]) * x(i);
    return y;
  }

  /// A * B, built one (contiguous) output column at a time.
  CMatrix apply_left(const CMatrix& b) const {
    CMatrix out = CMatrix::Zero(rows, b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      const cd* bc = b.col(c).data();
      cd* oc = out.col(c).data();
      for (Eigen::Index i = 0; i < rows; ++i) {
        cd s(0, 0);
        for (int k = row_ptr[static_cast<std::size_t>(i)];
             k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
          s += val[static_cast<std::size_t>(k)] * bc[col[static_cast<std::size_t>(k)]];
        oc[i] = s;
      }
    }
    return out;
  }
};

} // namespace kreisslab
