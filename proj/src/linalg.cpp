#include "modspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "modspec/error.hpp"

namespace modspec {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kStopRatio = 1e-13;
constexpr double kHermitianRatio = 1e-10;

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Index c = 0; c < a.cols(); ++c)
    for (Index r = 0; r < a.rows(); ++r)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

// Zeroes a(p,q) with G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p,q).
void rotate(Matrix& a, Matrix& v, Index p, Index q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  if (magnitude == 0.0) return;
  const Complex phase = apq / magnitude;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * magnitude);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex g00 = c;
  const Complex g01 = s;
  const Complex g10 = -s * std::conj(phase);
  const Complex g11 = c * std::conj(phase);

  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * g00 + akq * g10;
    a(k, q) = akp * g01 + akq * g11;
  }
  for (Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
    a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * g00 + vkq * g10;
    v(k, q) = vkp * g01 + vkq * g11;
  }
}

}  // namespace

bool all_finite(const Matrix& m) {
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

Eigensystem hermitian_eigensystem(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::ShapeMismatch, "eigensystem of a non-square matrix");
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const double scale = m.norm();
  const double defect = hermitian_defect(m);
  if (defect > kHermitianRatio * scale)
    throw Error(ErrorKind::NotHermitian, "||M - M*|| = " + std::to_string(defect));

  const Index n = m.rows();
  Matrix a = 0.5 * (m + m.adjoint());
  Matrix v = Matrix::Identity(n, n);

  Eigensystem out;
  const double target = kStopRatio * scale;
  bool converged = off_diagonal_norm(a) <= target;
  while (!converged && out.sweeps < kMaxSweeps) {
    for (Index p = 0; p + 1 < n; ++p)
      for (Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++out.sweeps;
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged)
    throw Error(ErrorKind::NoConvergence, "Jacobi sweep budget exhausted");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index l, Index r) { return a(l, l).real() > a(r, r).real(); });

  out.values.resize(order.size());
  out.vectors.resize(n, n);
  for (Index c = 0; c < n; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    out.values[static_cast<std::size_t>(c)] = a(src, src).real();
    out.vectors.col(c) = v.col(src);
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && m == m.adjoint()) {
    const auto es = hermitian_eigensystem(m);
    return std::max(std::abs(es.values.front()), std::abs(es.values.back()));
  }
  const Matrix gram = m.adjoint() * m;
  const auto es = hermitian_eigensystem(0.5 * (gram + gram.adjoint()));
  return std::sqrt(std::max(0.0, es.values.front()));
}

Matrix range_basis(const Matrix& projection) {
  const auto es = hermitian_eigensystem(projection);
  Index rank = 0;
  while (rank < static_cast<Index>(es.values.size()) &&
         es.values[static_cast<std::size_t>(rank)] > 0.5)
    ++rank;
  return es.vectors.leftCols(rank);
}

}  // namespace modspec
