#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace modspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Eigen-decomposition of a complex Hermitian matrix.
///
/// `values` are sorted descending; column c of `vectors` is the eigenvector for
/// `values[c]`. Equal eigenvalues keep the order in which the Jacobi sweep left
/// them on the diagonal.
struct Eigensystem {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Sweeps until the off-diagonal Frobenius norm is at most
/// 1e-13 * ||M||_F, at most 100 sweeps. Throws NotHermitian if
/// ||M - M*||_F > 1e-10 * ||M||_F; the input is symmetrized before solving.
Eigensystem hermitian_eigensystem(const Matrix& m);

/// Frobenius norm of M - M*.
double hermitian_defect(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Orthonormal basis of the range of a projection: the eigenvectors with
/// eigenvalue > 0.5, in descending eigenvalue order.
Matrix range_basis(const Matrix& projection);

bool all_finite(const Matrix& m);

}  // namespace modspec
