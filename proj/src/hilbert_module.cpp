#include "modspec/hilbert_module.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modspec/error.hpp"

namespace modspec {

void require_same_module(const AlgebraShape& s1, int n1, const AlgebraShape& s2, int n2,
                         const char* where) {
  if (s1 != s2 || n1 != n2) throw Error(ErrorKind::ShapeMismatch, where);
}

ModuleVector::ModuleVector(AlgebraShape s, int n_, std::vector<Matrix> b)
    : shape(std::move(s)), n(n_), blocks(std::move(b)) {
  if (n < 1) throw Error(ErrorKind::NonPositiveDim, "module rank must be positive");
  if (static_cast<int>(blocks.size()) != shape.factor_count())
    throw Error(ErrorKind::ShapeMismatch, "module vector block count");
  for (int j = 0; j < shape.factor_count(); ++j) {
    const Matrix& m = blocks[static_cast<std::size_t>(j)];
    if (m.rows() != static_cast<Index>(n) * shape.dim(j) || m.cols() != shape.dim(j))
      throw Error(ErrorKind::ShapeMismatch, "module vector block " + std::to_string(j));
    if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "non-finite module vector");
  }
}

ModuleVector ModuleVector::zero(const AlgebraShape& s, int n) {
  std::vector<Matrix> blocks;
  for (int k : s.dims()) blocks.push_back(Matrix::Zero(static_cast<Index>(n) * k, k));
  return {s, n, std::move(blocks)};
}

ModuleVector ModuleVector::basis(const AlgebraShape& s, int n, int k) {
  if (k < 0 || k >= n) throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  ModuleVector e = zero(s, n);
  for (int j = 0; j < s.factor_count(); ++j) {
    const Index d = s.dim(j);
    e.blocks[static_cast<std::size_t>(j)].middleRows(k * d, d) = Matrix::Identity(d, d);
  }
  return e;
}

ModuleVector ModuleVector::times(const AlgebraElement& a) const {
  require_same_shape(shape, a.shape, "right action");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < blocks.size(); ++j) out.push_back(blocks[j] * a.blocks[j]);
  return {shape, n, std::move(out)};
}

AlgebraElement ModuleVector::component(int k) const {
  std::vector<Matrix> out;
  for (int j = 0; j < shape.factor_count(); ++j) {
    const Index d = shape.dim(j);
    out.push_back(blocks[static_cast<std::size_t>(j)].middleRows(k * d, d));
  }
  return {shape, std::move(out)};
}

ModuleVector operator+(const ModuleVector& x, const ModuleVector& y) {
  require_same_module(x.shape, x.n, y.shape, y.n, "vector add");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < x.blocks.size(); ++j) out.push_back(x.blocks[j] + y.blocks[j]);
  return {x.shape, x.n, std::move(out)};
}

ModuleVector operator-(const ModuleVector& x, const ModuleVector& y) {
  require_same_module(x.shape, x.n, y.shape, y.n, "vector sub");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < x.blocks.size(); ++j) out.push_back(x.blocks[j] - y.blocks[j]);
  return {x.shape, x.n, std::move(out)};
}

ModuleOperator::ModuleOperator(AlgebraShape s, int n_, std::vector<Matrix> b)
    : shape(std::move(s)), n(n_), blocks(std::move(b)) {
  if (n < 1) throw Error(ErrorKind::NonPositiveDim, "module rank must be positive");
  if (static_cast<int>(blocks.size()) != shape.factor_count())
    throw Error(ErrorKind::ShapeMismatch, "module operator block count");
  for (int j = 0; j < shape.factor_count(); ++j) {
    const Matrix& m = blocks[static_cast<std::size_t>(j)];
    if (m.rows() != block_dim(j) || m.cols() != block_dim(j))
      throw Error(ErrorKind::ShapeMismatch, "module operator block " + std::to_string(j));
    if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "non-finite module operator");
  }
}

ModuleOperator ModuleOperator::identity(const AlgebraShape& s, int n) {
  std::vector<Matrix> blocks;
  for (int k : s.dims()) blocks.push_back(Matrix::Identity(static_cast<Index>(n) * k, n * k));
  return {s, n, std::move(blocks)};
}

ModuleOperator ModuleOperator::zero(const AlgebraShape& s, int n) {
  std::vector<Matrix> blocks;
  for (int k : s.dims()) blocks.push_back(Matrix::Zero(static_cast<Index>(n) * k, n * k));
  return {s, n, std::move(blocks)};
}

ModuleOperator ModuleOperator::diagonal(const std::vector<AlgebraElement>& entries) {
  if (entries.empty()) throw Error(ErrorKind::InvalidArgument, "empty diagonal");
  const AlgebraShape& s = entries.front().shape;
  const int n = static_cast<int>(entries.size());
  ModuleOperator out = zero(s, n);
  for (int i = 0; i < n; ++i) {
    require_same_shape(s, entries[static_cast<std::size_t>(i)].shape, "diagonal");
    for (int j = 0; j < s.factor_count(); ++j) {
      const Index d = s.dim(j);
      out.blocks[static_cast<std::size_t>(j)].block(i * d, i * d, d, d) =
          entries[static_cast<std::size_t>(i)].blocks[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

ModuleOperator ModuleOperator::adjoint() const {
  std::vector<Matrix> out;
  for (const auto& b : blocks) out.push_back(b.adjoint());
  return {shape, n, std::move(out)};
}

ModuleOperator ModuleOperator::scaled(Complex c) const {
  std::vector<Matrix> out;
  for (const auto& b : blocks) out.push_back(c * b);
  return {shape, n, std::move(out)};
}

namespace {

template <typename F>
ModuleOperator blockwise(const ModuleOperator& a, const ModuleOperator& b, const char* where,
                         F f) {
  require_same_module(a.shape, a.n, b.shape, b.n, where);
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < a.blocks.size(); ++j) out.push_back(f(a.blocks[j], b.blocks[j]));
  return {a.shape, a.n, std::move(out)};
}

}  // namespace

ModuleOperator operator+(const ModuleOperator& a, const ModuleOperator& b) {
  return blockwise(a, b, "operator add",
                   [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
}

ModuleOperator operator-(const ModuleOperator& a, const ModuleOperator& b) {
  return blockwise(a, b, "operator sub",
                   [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
}

ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b) {
  return blockwise(a, b, "operator compose",
                   [](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
}

AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  require_same_module(x.shape, x.n, y.shape, y.n, "inner_product");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < x.blocks.size(); ++j)
    out.push_back(x.blocks[j].adjoint() * y.blocks[j]);
  return {x.shape, std::move(out)};
}

double module_norm(const ModuleVector& x) { return std::sqrt(operator_norm(inner_product(x, x))); }

ModuleOperator theta_operator(const ModuleVector& x, const ModuleVector& y) {
  require_same_module(x.shape, x.n, y.shape, y.n, "theta_operator");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < x.blocks.size(); ++j)
    out.push_back(x.blocks[j] * y.blocks[j].adjoint());
  return {x.shape, x.n, std::move(out)};
}

ModuleVector apply_operator(const ModuleOperator& k, const ModuleVector& x) {
  require_same_module(k.shape, k.n, x.shape, x.n, "apply_operator");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < x.blocks.size(); ++j) out.push_back(k.blocks[j] * x.blocks[j]);
  return {x.shape, x.n, std::move(out)};
}

double tau_bar(const ModuleOperator& k) {
  double sum = 0.0;
  for (int j = 0; j < k.shape.factor_count(); ++j)
    sum += k.shape.weight(j) / k.shape.dim(j) * k.blocks[static_cast<std::size_t>(j)].trace().real();
  return sum;
}

double operator_norm(const ModuleOperator& k) {
  double norm = 0.0;
  for (const auto& b : k.blocks) norm = std::max(norm, spectral_norm(b));
  return norm;
}

double hermitian_defect(const ModuleOperator& k) {
  double d = 0.0;
  for (const auto& b : k.blocks) d = std::max(d, spectral_norm(b - b.adjoint()));
  return d;
}

PositivityReport is_strictly_positive(const ModuleOperator& k, double tol) {
  PositivityReport report{false, std::numeric_limits<double>::infinity(), hermitian_defect(k)};
  if (report.hermitian_defect > tol) return report;
  for (const auto& b : k.blocks)
    report.min_eigenvalue = std::min(
        report.min_eigenvalue, hermitian_eigensystem(0.5 * (b + b.adjoint())).values.back());
  report.strictly_positive = report.min_eigenvalue > tol;
  return report;
}

std::vector<ModuleVector> orthonormalize(const std::vector<ModuleVector>& xs) {
  std::vector<ModuleVector> out;
  for (const auto& x : xs) {
    if (!out.empty()) require_same_module(out.front().shape, out.front().n, x.shape, x.n,
                                          "orthonormalize");
    ModuleVector y = x;
    for (const auto& prev : out) y = y - prev.times(inner_product(prev, x));
    const AlgebraElement gram = inner_product(y, y);
    std::vector<Matrix> inv_sqrt;
    for (const auto& g : gram.blocks) {
      const auto es = hermitian_eigensystem(0.5 * (g + g.adjoint()));
      if (es.values.back() <= 1e-8)
        throw Error(ErrorKind::RankDeficient,
                    "Gram element eigenvalue " + std::to_string(es.values.back()));
      Eigen::VectorXd scale(static_cast<Index>(es.values.size()));
      for (std::size_t c = 0; c < es.values.size(); ++c)
        scale(static_cast<Index>(c)) = 1.0 / std::sqrt(es.values[c]);
      inv_sqrt.push_back(es.vectors * scale.cast<Complex>().asDiagonal() * es.vectors.adjoint());
    }
    out.push_back(y.times(AlgebraElement(gram.shape, std::move(inv_sqrt))));
  }
  return out;
}

double orthonormality_defect(const std::vector<ModuleVector>& xs) {
  double defect = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      AlgebraElement g = inner_product(xs[i], xs[j]);
      if (i == j) g = g - AlgebraElement::identity(g.shape);
      defect = std::max(defect, operator_norm(g));
    }
  return defect;
}

ModuleOperator span_projection(const AlgebraShape& shape, int n,
                               const std::vector<ModuleVector>& xs) {
  ModuleOperator p = ModuleOperator::zero(shape, n);
  for (const auto& x : xs) p = p + theta_operator(x, x);
  return p;
}

double tail_norm(const ModuleOperator& k, const std::vector<ModuleVector>& xs) {
  for (const auto& x : xs) require_same_module(k.shape, k.n, x.shape, x.n, "tail_norm");
  const double defect = orthonormality_defect(xs);
  if (defect > 1e-8)
    throw Error(ErrorKind::NotOrthonormal, "family defect " + std::to_string(defect));
  const ModuleOperator complement =
      ModuleOperator::identity(k.shape, k.n) - span_projection(k.shape, k.n, xs);
  return operator_norm(complement * k * complement);
}

ModuleVector random_module_vector(SplitMix64& rng, const AlgebraShape& shape, int n) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(gaussian_matrix(rng, static_cast<Index>(n) * k, k));
  return {shape, n, std::move(blocks)};
}

ModuleOperator random_module_operator(SplitMix64& rng, const AlgebraShape& shape, int n) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims())
    blocks.push_back(gaussian_matrix(rng, static_cast<Index>(n) * k, static_cast<Index>(n) * k));
  return {shape, n, std::move(blocks)};
}

ModuleOperator random_hermitian_operator(SplitMix64& rng, const AlgebraShape& shape, int n) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(random_hermitian_matrix(rng, static_cast<Index>(n) * k));
  return {shape, n, std::move(blocks)};
}

ModuleOperator random_positive_operator(SplitMix64& rng, const AlgebraShape& shape, int n,
                                        double shift) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) {
    const Index d = static_cast<Index>(n) * k;
    const Matrix g = gaussian_matrix(rng, d, d);
    Matrix pos = g.adjoint() * g + shift * Matrix::Identity(d, d);
    blocks.push_back(0.5 * (pos + pos.adjoint()));
  }
  return {shape, n, std::move(blocks)};
}

ModuleOperator random_module_unitary(SplitMix64& rng, const AlgebraShape& shape, int n) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(random_unitary_matrix(rng, static_cast<Index>(n) * k));
  return {shape, n, std::move(blocks)};
}

}  // namespace modspec
