#include "modspec/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "modspec/error.hpp"

namespace modspec {

AlgebraShape::AlgebraShape(std::vector<int> dims, std::vector<double> weights)
    : dims_(std::move(dims)), weights_(std::move(weights)) {
  if (dims_.empty()) throw Error(ErrorKind::NonPositiveDim, "algebra needs at least one factor");
  for (int k : dims_)
    if (k < 1) throw Error(ErrorKind::NonPositiveDim, "factor dimension " + std::to_string(k));
  if (weights_.empty()) weights_.assign(dims_.size(), 1.0 / static_cast<double>(dims_.size()));
  if (weights_.size() != dims_.size())
    throw Error(ErrorKind::WeightMismatch, std::to_string(weights_.size()) + " weights for " +
                                               std::to_string(dims_.size()) + " factors");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorKind::WeightMismatch, "trace weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-14)
    for (double& w : weights_) w /= total;
}

bool AlgebraShape::operator==(const AlgebraShape& other) const {
  if (dims_ != other.dims_) return false;
  for (std::size_t j = 0; j < weights_.size(); ++j)
    if (std::abs(weights_[j] - other.weights_[j]) > 1e-14) return false;
  return true;
}

AlgebraShape make_algebra(std::vector<int> dims, std::vector<double> weights) {
  return AlgebraShape(std::move(dims), std::move(weights));
}

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where) {
  if (a != b) throw Error(ErrorKind::ShapeMismatch, where);
}

AlgebraElement::AlgebraElement(AlgebraShape s, std::vector<Matrix> b)
    : shape(std::move(s)), blocks(std::move(b)) {
  if (static_cast<int>(blocks.size()) != shape.factor_count())
    throw Error(ErrorKind::ShapeMismatch, "block count does not match the algebra");
  for (int j = 0; j < shape.factor_count(); ++j) {
    const Matrix& m = blocks[static_cast<std::size_t>(j)];
    if (m.rows() != shape.dim(j) || m.cols() != shape.dim(j))
      throw Error(ErrorKind::ShapeMismatch, "block " + std::to_string(j) + " has wrong size");
    if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "non-finite entry in element");
  }
}

AlgebraElement AlgebraElement::scalar(const AlgebraShape& s, Complex c) {
  std::vector<Matrix> blocks;
  for (int k : s.dims()) blocks.push_back(c * Matrix::Identity(k, k));
  return {s, std::move(blocks)};
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& s) { return scalar(s, 1.0); }
AlgebraElement AlgebraElement::zero(const AlgebraShape& s) { return scalar(s, 0.0); }

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> out;
  for (const auto& b : blocks) out.push_back(b.adjoint());
  return {shape, std::move(out)};
}

AlgebraElement AlgebraElement::scaled(Complex c) const {
  std::vector<Matrix> out;
  for (const auto& b : blocks) out.push_back(c * b);
  return {shape, std::move(out)};
}

namespace {

template <typename F>
AlgebraElement blockwise(const AlgebraElement& a, const AlgebraElement& b, const char* where,
                         F f) {
  require_same_shape(a.shape, b.shape, where);
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < a.blocks.size(); ++j) out.push_back(f(a.blocks[j], b.blocks[j]));
  return {a.shape, std::move(out)};
}

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "add", [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "sub", [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "mul", [](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
}

AlgebraElement element_arithmetic(const AlgebraElement& a, const AlgebraElement& b,
                                  ArithmeticOp op, Complex factor) {
  switch (op) {
    case ArithmeticOp::Add: return a + b;
    case ArithmeticOp::Mul: return a * b;
    case ArithmeticOp::Adjoint: return a.adjoint();
    case ArithmeticOp::Scale: return a.scaled(factor);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown arithmetic op");
}

double operator_norm(const AlgebraElement& a) {
  double norm = 0.0;
  for (const auto& b : a.blocks) norm = std::max(norm, spectral_norm(b));
  return norm;
}

double hermitian_defect(const AlgebraElement& a) {
  double d = 0.0;
  for (const auto& b : a.blocks) d = std::max(d, spectral_norm(b - b.adjoint()));
  return d;
}

CenterElement center_trace(const AlgebraElement& a) {
  CenterElement out;
  for (int j = 0; j < a.shape.factor_count(); ++j)
    out.values.push_back(a.blocks[static_cast<std::size_t>(j)].trace() /
                         static_cast<double>(a.shape.dim(j)));
  return out;
}

Complex scalar_trace(const AlgebraElement& a) {
  const CenterElement t = center_trace(a);
  Complex sum = 0.0;
  for (int j = 0; j < a.shape.factor_count(); ++j)
    sum += a.shape.weight(j) * t.values[static_cast<std::size_t>(j)];
  return sum;
}

std::vector<int> projection_ranks(const AlgebraElement& p) {
  std::vector<int> ranks;
  for (const auto& b : p.blocks) ranks.push_back(static_cast<int>(range_basis(b).cols()));
  return ranks;
}

AlgebraElement SpectralForm::reconstruct() const {
  AlgebraElement sum = AlgebraElement::zero(shape);
  for (const auto& atom : atoms) sum = sum + atom.projection.scaled(atom.value);
  return sum;
}

SpectralForm spectral_decomposition(const AlgebraElement& a, double cluster_tol) {
  struct Entry {
    double value;
    int block;
    Index column;
  };
  const double scale = std::max(1.0, operator_norm(a));
  if (hermitian_defect(a) > 1e-10 * scale)
    throw Error(ErrorKind::NotHermitian, "spectral decomposition of a non-Hermitian element");

  std::vector<Eigensystem> systems;
  std::vector<Entry> entries;
  for (int j = 0; j < a.shape.factor_count(); ++j) {
    systems.push_back(hermitian_eigensystem(a.blocks[static_cast<std::size_t>(j)]));
    const auto& vals = systems.back().values;
    for (std::size_t c = 0; c < vals.size(); ++c)
      entries.push_back({vals[c], j, static_cast<Index>(c)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& l, const Entry& r) { return l.value < r.value; });

  SpectralForm form{a.shape, {}};
  std::size_t start = 0;
  while (start < entries.size()) {
    std::size_t end = start + 1;
    while (end < entries.size() && entries[end].value - entries[end - 1].value < cluster_tol) ++end;
    double mean = 0.0;
    AlgebraElement proj = AlgebraElement::zero(a.shape);
    for (std::size_t e = start; e < end; ++e) {
      mean += entries[e].value;
      const auto& vec = systems[static_cast<std::size_t>(entries[e].block)].vectors.col(
          entries[e].column);
      proj.blocks[static_cast<std::size_t>(entries[e].block)] += vec * vec.adjoint();
    }
    mean /= static_cast<double>(end - start);
    form.atoms.push_back({mean, std::move(proj)});
    start = end;
  }
  return form;
}

BlockSpectrum block_spectrum(const SpectralForm& form, int block) {
  const Index k = form.shape.dim(block);
  BlockSpectrum out{Matrix(k, k), {}};
  Index filled = 0;
  for (auto it = form.atoms.rbegin(); it != form.atoms.rend(); ++it) {
    const Matrix basis = range_basis(it->projection.blocks[static_cast<std::size_t>(block)]);
    if (filled + basis.cols() > k)
      throw Error(ErrorKind::InvalidArgument, "spectral form projections overlap");
    out.basis.middleCols(filled, basis.cols()) = basis;
    out.values.insert(out.values.end(), static_cast<std::size_t>(basis.cols()), it->value);
    filled += basis.cols();
  }
  if (filled != k)
    throw Error(ErrorKind::InvalidArgument, "spectral form projections do not sum to one");
  return out;
}

SpectralForm spectral_form_from_blocks(const AlgebraShape& shape,
                                       const std::vector<BlockSpectrum>& blocks) {
  std::map<double, AlgebraElement> grouped;
  for (int j = 0; j < shape.factor_count(); ++j) {
    const auto& bs = blocks[static_cast<std::size_t>(j)];
    for (std::size_t c = 0; c < bs.values.size(); ++c) {
      auto it = grouped.try_emplace(bs.values[c], AlgebraElement::zero(shape)).first;
      const auto col = bs.basis.col(static_cast<Index>(c));
      it->second.blocks[static_cast<std::size_t>(j)] += col * col.adjoint();
    }
  }
  SpectralForm form{shape, {}};
  for (auto& [value, proj] : grouped) form.atoms.push_back({value, std::move(proj)});
  return form;
}

std::vector<double> block_multiset(const SpectralForm& form, int block) {
  std::vector<double> values;
  for (const auto& atom : form.atoms) {
    const double tr = atom.projection.blocks[static_cast<std::size_t>(block)].trace().real();
    const auto rank = static_cast<std::size_t>(std::llround(tr));
    values.insert(values.end(), rank, atom.value);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

ValidationReport validate_element(const AlgebraElement& a, ElementKind kind, double tol) {
  switch (kind) {
    case ElementKind::Projection: {
      const double idem = operator_norm(a * a - a);
      const double herm = hermitian_defect(a);
      const double defect = std::max(idem, herm);
      if (idem > tol) return {false, idem, "||p^2 - p|| exceeds tolerance"};
      if (herm > tol) return {false, herm, "||p - p*|| exceeds tolerance"};
      return {true, defect, "projection"};
    }
    case ElementKind::Positive: {
      const double herm = hermitian_defect(a);
      if (herm > tol) return {false, herm, "not Hermitian"};
      double min_eig = std::numeric_limits<double>::infinity();
      for (const auto& b : a.blocks)
        min_eig = std::min(min_eig, hermitian_eigensystem(0.5 * (b + b.adjoint())).values.back());
      if (min_eig < -tol) return {false, -min_eig, "negative eigenvalue"};
      return {true, std::max(herm, std::max(0.0, -min_eig)), "positive"};
    }
    case ElementKind::Unitary: {
      const double d = operator_norm(a.adjoint() * a - AlgebraElement::identity(a.shape));
      if (d > tol) return {false, d, "||u*u - 1|| exceeds tolerance"};
      return {true, d, "unitary"};
    }
  }
  return {false, 0.0, "unknown kind"};
}

Subprojections equivalent_subprojections(const AlgebraElement& p, const AlgebraElement& q) {
  require_same_shape(p.shape, q.shape, "equivalent_subprojections");
  for (const auto* e : {&p, &q}) {
    const auto report = validate_element(*e, ElementKind::Projection, 1e-10);
    if (!report.ok) throw Error(ErrorKind::NotProjection, report.detail);
  }
  std::vector<Matrix> rp, rq, v;
  for (int j = 0; j < p.shape.factor_count(); ++j) {
    const Matrix bp = range_basis(p.blocks[static_cast<std::size_t>(j)]);
    const Matrix bq = range_basis(q.blocks[static_cast<std::size_t>(j)]);
    const Index r = std::min(bp.cols(), bq.cols());
    const auto sp = bp.leftCols(r);
    const auto sq = bq.leftCols(r);
    rp.push_back(sp * sp.adjoint());
    rq.push_back(sq * sq.adjoint());
    v.push_back(sq * sp.adjoint());
  }
  return {{p.shape, std::move(rp)}, {p.shape, std::move(rq)}, {p.shape, std::move(v)}};
}

AlgebraElement random_element(SplitMix64& rng, const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(gaussian_matrix(rng, k, k));
  return {shape, std::move(blocks)};
}

AlgebraElement random_hermitian_element(SplitMix64& rng, const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(random_hermitian_matrix(rng, k));
  return {shape, std::move(blocks)};
}

AlgebraElement random_unitary_element(SplitMix64& rng, const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) blocks.push_back(random_unitary_matrix(rng, k));
  return {shape, std::move(blocks)};
}

AlgebraElement random_projection(SplitMix64& rng, const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int k : shape.dims()) {
    const auto rank = static_cast<Index>(rng.next() % static_cast<std::uint64_t>(k + 1));
    const Matrix u = random_unitary_matrix(rng, k);
    blocks.push_back(u.leftCols(rank) * u.leftCols(rank).adjoint());
  }
  return {shape, std::move(blocks)};
}

}  // namespace modspec
