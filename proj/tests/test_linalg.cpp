#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "modspec/error.hpp"
#include "modspec/linalg.hpp"
#include "modspec/random.hpp"

using namespace modspec;

TEST_CASE("2x2 closed form") {
  // [[a, b], [conj b, d]] has eigenvalues (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2).
  Matrix m(2, 2);
  const Complex b(0.3, -1.2);
  m << 2.0, b, std::conj(b), -0.5;
  const auto es = hermitian_eigensystem(m);
  const double mid = 0.75, rad = std::sqrt(1.25 * 1.25 + std::norm(b));
  CHECK(es.values[0] == doctest::Approx(mid + rad).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(mid - rad).epsilon(1e-14));
}

TEST_CASE("3x3 circulant closed form") {
  // Circulant with first row (c0, c1, c2): eigenvalues c0 + c1 w^k + c2 w^{2k}.
  const double c0 = 1.0, c1 = 0.4;
  Matrix m(3, 3);
  m << c0, c1, c1, c1, c0, c1, c1, c1, c0;
  const auto es = hermitian_eigensystem(m);
  CHECK(es.values[0] == doctest::Approx(c0 + 2 * c1));
  CHECK(es.values[1] == doctest::Approx(c0 - c1));
  CHECK(es.values[2] == doctest::Approx(c0 - c1));
}

TEST_CASE("Jacobi agrees with an independent solver") {
  SplitMix64 rng(11);
  for (int dim : {1, 2, 3, 5, 8, 12}) {
    const Matrix m = random_hermitian_matrix(rng, dim);
    const auto es = hermitian_eigensystem(m);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(m);
    for (int i = 0; i < dim; ++i)
      CHECK(std::abs(es.values[static_cast<std::size_t>(i)] - ref.eigenvalues()(dim - 1 - i)) < 1e-12);
    Matrix d = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = es.values[static_cast<std::size_t>(i)];
    CHECK((es.vectors * d * es.vectors.adjoint() - m).norm() < 1e-12);
    CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(dim, dim)).norm() < 1e-13);
  }
}

TEST_CASE("degenerate spectrum") {
  SplitMix64 rng(3);
  const Matrix u = random_unitary_matrix(rng, 4);
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 2.0; d(1, 1) = 2.0; d(2, 2) = -1.0; d(3, 3) = -1.0;
  const auto es = hermitian_eigensystem(u * d * u.adjoint());
  CHECK(es.values[0] == doctest::Approx(2.0));
  CHECK(es.values[1] == doctest::Approx(2.0));
  CHECK(es.values[3] == doctest::Approx(-1.0));
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(hermitian_eigensystem(m), Error);
  CHECK(hermitian_defect(m) > 0.5);
}

TEST_CASE("spectral norm") {
  Matrix m(2, 2);
  m << 0.0, 3.0, 0.0, 0.0;
  CHECK(spectral_norm(m) == doctest::Approx(3.0));
  Matrix h(2, 2);
  h << -4.0, 0.0, 0.0, 1.0;
  CHECK(spectral_norm(h) == doctest::Approx(4.0));
}

TEST_CASE("random unitary is unitary") {
  SplitMix64 rng(5);
  const Matrix u = random_unitary_matrix(rng, 6);
  CHECK((u.adjoint() * u - Matrix::Identity(6, 6)).norm() < 1e-13);
}

TEST_CASE("SplitMix64 reference stream") {
  // First outputs for seed 0 from the reference splitmix64.c.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("normal moments") {
  SplitMix64 rng(9);
  double sum = 0, sq = 0, csq = 0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
    csq += std::norm(rng.complex_normal());
  }
  CHECK(std::abs(sum / count) < 0.05);
  CHECK(std::abs(sq / count - 1.0) < 0.05);
  CHECK(std::abs(csq / count - 1.0) < 0.05);
}
