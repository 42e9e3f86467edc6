#include "modspec/random.hpp"

#include <cmath>
#include <numbers>

namespace modspec {

double SplitMix64::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex SplitMix64::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix gaussian_matrix(SplitMix64& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
  return m;
}

Matrix random_hermitian_matrix(SplitMix64& rng, Index dim) {
  const Matrix g = gaussian_matrix(rng, dim, dim);
  return 0.5 * (g + g.adjoint());
}

Matrix random_unitary_matrix(SplitMix64& rng, Index dim) {
  const Matrix g = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index c = 0; c < dim; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) q.col(c) *= r(c, c) / mag;
  }
  return q;
}

}  // namespace modspec
