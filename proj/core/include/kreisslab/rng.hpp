#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Seeded generator with hand-rolled distributions so that identical seeds
/// give identical streams on every platform (std:: distributions are
/// implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Complex standard normal (unit total variance).
  cd cnormal() {
    const double s = 0.7071067811865476;
    return cd(s * normal(), s * normal());
  }

  CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = cnormal();
    return a;
  }

  CVector gaussian_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

private:
  std::mt19937_64 gen_;
};

} // namespace kreisslab
