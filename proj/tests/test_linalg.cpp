#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kreisslab/linalg.hpp"
#include "kreisslab/matrix_io.hpp"
#include "kreisslab/rng.hpp"
#include "oracles.hpp"

using namespace kreisslab;

namespace {

CMatrix stable_random(Eigen::Index n, std::uint64_t seed, double radius = 0.8) {
  Rng rng(seed);
  CMatrix a = rng.gaussian_matrix(n, n);
  return a * (radius / op_norm(a));
}

} // namespace

TEST_CASE("op_norm basics") {
  CHECK(op_norm(CMatrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 2.0;
  CHECK(op_norm(a) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("op_norm matches the independent Jacobi SVD oracle") {
  Rng rng(7);
  CMatrix a = rng.gaussian_matrix(20, 20);
  const double mine = op_norm(a);
  const double ref = oracles::svd_op_norm(a);
  CHECK(std::abs(mine - ref) <= 1e-10 * ref);

  CMatrix rect = rng.gaussian_matrix(13, 29);
  CHECK(std::abs(op_norm(rect) - oracles::svd_op_norm(rect)) <=
        1e-10 * oracles::svd_op_norm(rect));
}

TEST_CASE("op_norm is unitarily invariant") {
  Rng rng(11);
  CMatrix a = rng.gaussian_matrix(12, 12);
  const CMatrix u = random_unitary(12, 5);
  const CMatrix v = random_unitary(12, 6);
  CHECK(std::abs(op_norm(u * a * v) - op_norm(a)) <= 1e-10 * op_norm(a));
}

TEST_CASE("op_norm rejects non-finite input") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(op_norm(a), input_error);
}

TEST_CASE("resolvent closed forms") {
  SUBCASE("zero matrix") {
    const CMatrix r = resolvent(CMatrix::Zero(2, 2), cd(2, 0));
    CHECK((r - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-14);
  }
  SUBCASE("nilpotent Neumann series") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    const cd z(1.3, -0.4);
    const CMatrix r = resolvent(a, z);
    CHECK(std::abs(r(0, 0) - 1.0 / z) <= 1e-14);
    CHECK(std::abs(r(0, 1) - 1.0 / (z * z)) <= 1e-14);
    CHECK(std::abs(r(1, 0)) <= 1e-15);
    CHECK(std::abs(r(1, 1) - 1.0 / z) <= 1e-14);
  }
}

TEST_CASE("resolvent residual and identity") {
  const CMatrix a = stable_random(16, 3);
  const cd z(1.5, 0.0);
  const CMatrix r = resolvent(a, z);
  CMatrix zia = -a;
  zia.diagonal().array() += z;
  CHECK(op_norm(zia * r - CMatrix::Identity(16, 16)) <= 1e-12 * op_norm(r) * std::abs(z));

  // resolvent identity R(z1) - R(z2) = (z2 - z1) R(z1) R(z2)
  const cd z1(1.4, 0.3), z2(1.9, -0.8);
  const CMatrix r1 = resolvent(a, z1), r2 = resolvent(a, z2);
  CHECK(op_norm((r1 - r2) - (z2 - z1) * r1 * r2) <= 1e-10);
}

TEST_CASE("resolvent detects singular shifts") {
  CMatrix a = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(resolvent(a, cd(1, 0)), singularity_error);
  try {
    resolvent(a, cd(1, 0));
  } catch (const singularity_error& e) {
    CHECK(std::abs(e.point - cd(1, 0)) == 0.0);
  }
}

TEST_CASE("far-field resolvent scaling") {
  const CMatrix a = stable_random(10, 5);
  const double z = 1e6 * (1.0 + op_norm(a));
  const double v = (z - 1.0) * op_norm(resolvent(a, cd(z, 0)));
  CHECK(v >= 1.0 - 1e-4);
  CHECK(v <= 1.0 + 1e-4);
}

TEST_CASE("min_eig_hermitian") {
  CHECK(min_eig_hermitian(CMatrix::Identity(4, 4)) == doctest::Approx(1.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 3.0;
  CHECK(min_eig_hermitian(d) == doctest::Approx(-1.0));

  Rng rng(17);
  const CMatrix b = rng.gaussian_matrix(4, 4);
  const CMatrix h = b + b.adjoint();
  const double mine = min_eig_hermitian(h);
  const double ref = oracles::charpoly_min_eig(h);
  CHECK(std::abs(mine - ref) <= 1e-10 * std::max(1.0, op_norm(h)));

  CHECK_THROWS_AS(min_eig_hermitian(rng.gaussian_matrix(3, 3)), input_error);
}

TEST_CASE("poly_eval") {
  const PolyCoeffs one({cd(1, 0)});
  const CMatrix a = stable_random(5, 23);
  CHECK(op_norm(poly_eval(one, a) - CMatrix::Identity(5, 5)) <= 1e-15);

  CMatrix nil = CMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  const PolyCoeffs zsq({cd(0, 0), cd(0, 0), cd(1, 0)});
  CHECK(op_norm(poly_eval(zsq, nil)) <= 1e-15);

  // monomial-sum oracle, degree 5 on a 6x6 matrix
  Rng rng(29);
  std::vector<cd> coeff(6);
  for (auto& c : coeff) c = rng.cnormal();
  const PolyCoeffs p(coeff);
  const CMatrix m = rng.gaussian_matrix(6, 6) * 0.7;
  CMatrix ref = CMatrix::Zero(6, 6);
  CMatrix pw = CMatrix::Identity(6, 6);
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    ref += coeff[k] * pw;
    pw = pw * m;
  }
  const CMatrix mine = poly_eval(p, m);
  CHECK(op_norm(mine - ref) <= 1e-12 * std::max(1.0, op_norm(ref)));
}

TEST_CASE("poly_eval is linear in the polynomial") {
  Rng rng(31);
  std::vector<cd> pc(5), qc(5);
  for (auto& c : pc) c = rng.cnormal();
  for (auto& c : qc) c = rng.cnormal();
  const cd alpha = rng.cnormal(), beta = rng.cnormal();
  std::vector<cd> combo(5);
  for (int i = 0; i < 5; ++i) combo[i] = alpha * pc[i] + beta * qc[i];
  const CMatrix a = stable_random(7, 37);
  const CMatrix lhs = poly_eval(PolyCoeffs(combo), a);
  const CMatrix rhs =
      alpha * poly_eval(PolyCoeffs(pc), a) + beta * poly_eval(PolyCoeffs(qc), a);
  CHECK(op_norm(lhs - rhs) <= 1e-12 * std::max(1.0, op_norm(rhs)));
}

TEST_CASE("sup_on_circle") {
  CHECK(sup_on_circle(PolyCoeffs({cd(0, 0), cd(1, 0)}), 2.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sup_on_circle(PolyCoeffs({cd(1, 0), cd(1, 0)}), 1.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sup_on_circle(PolyCoeffs({cd(1, 0), cd(1, 0), cd(1, 0)}), 1.0) ==
        doctest::Approx(3.0).epsilon(1e-10));
  // dense-scan oracle on a random degree-10 polynomial
  Rng rng(41);
  std::vector<cd> coeff(11);
  for (auto& c : coeff) c = rng.cnormal();
  const PolyCoeffs p(coeff);
  double ref = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double th = 2 * 3.141592653589793 * i / 200000;
    ref = std::max(ref, std::abs(poly_eval(p, 1.3 * cd(std::cos(th), std::sin(th)))));
  }
  CHECK(sup_on_circle(p, 1.3) >= ref - 1e-9);
  CHECK(sup_on_circle(p, 1.3) <= ref * (1.0 + 1e-6));

  // degree 64 with positive coefficients: the max sits at z = r exactly
  std::vector<cd> pos(65);
  for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = 1.0 + 1.0 / (1.0 + k);
  const PolyCoeffs q64(pos);
  double exact = 0.0;
  for (std::size_t k = 0; k < pos.size(); ++k) exact += pos[k].real() * std::pow(1.1, double(k));
  CHECK(std::abs(sup_on_circle(q64, 1.1) - exact) <= 1e-8 * exact);
}

TEST_CASE("matrix JSON round-trip is bit-exact") {
  Rng rng(43);
  CMatrix a = rng.gaussian_matrix(5, 7);
  a(0, 0) = cd(0.1 + 0.2, -1e-300);
  a(1, 2) = cd(1.0 / 3.0, 2.0 / 7.0);
  const CMatrix b = matrix_from_json(matrix_to_json(a));
  REQUIRE(b.rows() == a.rows());
  REQUIRE(b.cols() == a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      CHECK(a(i, j).real() == b(i, j).real());
      CHECK(a(i, j).imag() == b(i, j).imag());
    }
  // and the serialized form itself is stable
  CHECK(matrix_to_json(a) == matrix_to_json(b));
}

TEST_CASE("matrix JSON rejects malformed input") {
  CHECK_THROWS_AS(matrix_from_json("{\"rows\":2,\"cols\":2,\"re\":[1],\"im\":[0]}"),
                  input_error);
  CHECK_THROWS_AS(matrix_from_json("not json"), input_error);
}

TEST_CASE("eigenvalues of companion-style matrices") {
  // eigenvalues of a diagonal + nilpotent matrix are the diagonal
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = cd(0.3, 0.1);
  a(1, 1) = cd(-0.2, 0);
  a(2, 2) = cd(0.9, -0.4);
  a(0, 2) = 5.0;
  auto ev = eigenvalues(a);
  std::sort(ev.begin(), ev.end(), [](cd x, cd y) { return x.real() < y.real(); });
  CHECK(std::abs(ev[0] - cd(-0.2, 0)) <= 1e-12);
  CHECK(std::abs(ev[1] - cd(0.3, 0.1)) <= 1e-12);
  CHECK(std::abs(ev[2] - cd(0.9, -0.4)) <= 1e-12);
  CHECK(spectral_radius(a) == doctest::Approx(std::abs(cd(0.9, -0.4))));
}
