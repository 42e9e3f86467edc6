#include "modspec/weak_diag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "modspec/error.hpp"

namespace modspec {

namespace {

bool block_ordered(const BlockSpectrum& a, const BlockSpectrum& b) {
  return a.values.back() >= b.values.front();
}

// Redistributes one block of a pair in place and returns the 2k x 2k witness.
Matrix exchange_block(BlockSpectrum& a, BlockSpectrum& b) {
  const Index k = a.basis.rows();
  if (block_ordered(a, b)) return Matrix::Identity(2 * k, 2 * k);

  struct Source {
    double value;
    bool first;
    Index column;
  };
  std::vector<Source> sources;
  for (Index c = 0; c < k; ++c) sources.push_back({a.values[static_cast<std::size_t>(c)], true, c});
  for (Index c = 0; c < k; ++c) sources.push_back({b.values[static_cast<std::size_t>(c)], false, c});
  std::stable_sort(sources.begin(), sources.end(),
                   [](const Source& l, const Source& r) { return l.value > r.value; });

  auto embed = [k](const Matrix& basis, bool first, Index column) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * k);
    v.segment(first ? 0 : k, k) = basis.col(column);
    return v;
  };

  Matrix w = Matrix::Zero(2 * k, 2 * k);
  for (Index p = 0; p < 2 * k; ++p) {
    const auto& src = sources[static_cast<std::size_t>(p)];
    const Eigen::VectorXcd s = embed(src.first ? a.basis : b.basis, src.first, src.column);
    const Eigen::VectorXcd t = p < k ? embed(a.basis, true, p) : embed(b.basis, false, p - k);
    w += s * t.adjoint();
  }
  for (Index p = 0; p < k; ++p) {
    a.values[static_cast<std::size_t>(p)] = sources[static_cast<std::size_t>(p)].value;
    b.values[static_cast<std::size_t>(p)] = sources[static_cast<std::size_t>(p + k)].value;
  }
  return w;
}

std::vector<BlockSpectrum> all_blocks(const SpectralForm& f) {
  std::vector<BlockSpectrum> out;
  for (int j = 0; j < f.shape.factor_count(); ++j) out.push_back(block_spectrum(f, j));
  return out;
}

}  // namespace

OrderedPair order_pair(const SpectralForm& a, const SpectralForm& b) {
  require_same_shape(a.shape, b.shape, "order_pair");
  const AlgebraShape& shape = a.shape;
  auto sa = all_blocks(a);
  auto sb = all_blocks(b);
  bool ordered = true;
  for (std::size_t j = 0; j < sa.size(); ++j) ordered = ordered && block_ordered(sa[j], sb[j]);
  if (ordered) return {a, b, ModuleOperator::identity(shape, 2)};

  ModuleOperator w = ModuleOperator::zero(shape, 2);
  for (std::size_t j = 0; j < sa.size(); ++j) w.blocks[j] = exchange_block(sa[j], sb[j]);
  return {spectral_form_from_blocks(shape, sa), spectral_form_from_blocks(shape, sb),
          std::move(w)};
}

OrderedFamily order_all(const std::vector<SpectralForm>& lams) {
  if (lams.empty()) throw Error(ErrorKind::InvalidArgument, "order_all of an empty family");
  const AlgebraShape& shape = lams.front().shape;
  for (const auto& l : lams) require_same_shape(shape, l.shape, "order_all");
  const int n = static_cast<int>(lams.size());

  std::vector<std::vector<BlockSpectrum>> spectra;
  for (const auto& l : lams) spectra.push_back(all_blocks(l));

  OrderedFamily out{{}, ModuleOperator::identity(shape, n), 0};
  std::vector<bool> touched(lams.size(), false);
  // Merge-split bubble passes; each pass fixes the largest remaining chunk.
  for (int pass = 0; pass < n * n; ++pass) {
    bool changed = false;
    for (int i = 0; i + 1 < n; ++i) {
      auto& left = spectra[static_cast<std::size_t>(i)];
      auto& right = spectra[static_cast<std::size_t>(i + 1)];
      bool ordered = true;
      for (std::size_t j = 0; j < left.size(); ++j)
        ordered = ordered && block_ordered(left[j], right[j]);
      if (ordered) continue;
      ModuleOperator step = ModuleOperator::identity(shape, n);
      for (std::size_t j = 0; j < left.size(); ++j) {
        const Index k = shape.dim(static_cast<int>(j));
        step.blocks[j].block(i * k, i * k, 2 * k, 2 * k) = exchange_block(left[j], right[j]);
      }
      out.witness = out.witness * step;
      touched[static_cast<std::size_t>(i)] = touched[static_cast<std::size_t>(i + 1)] = true;
      ++out.exchanges;
      changed = true;
    }
    if (!changed) break;
  }
  for (std::size_t i = 0; i < lams.size(); ++i)
    out.lambdas.push_back(touched[i] ? spectral_form_from_blocks(shape, spectra[i]) : lams[i]);
  return out;
}

std::vector<std::vector<std::vector<double>>> sorted_chunks(const std::vector<SpectralForm>& lams) {
  const AlgebraShape& shape = lams.front().shape;
  std::vector<std::vector<std::vector<double>>> out;
  for (int j = 0; j < shape.factor_count(); ++j) {
    std::vector<double> all;
    for (const auto& l : lams) {
      const auto m = block_multiset(l, j);
      all.insert(all.end(), m.begin(), m.end());
    }
    std::stable_sort(all.begin(), all.end(), std::greater<>());
    const auto k = static_cast<std::size_t>(shape.dim(j));
    std::vector<std::vector<double>> chunks;
    for (std::size_t i = 0; i < lams.size(); ++i)
      chunks.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(i * k),
                          all.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
    out.push_back(std::move(chunks));
  }
  return out;
}

AlgebraElement conjugating_unitary(const AlgebraElement& lam, const AlgebraElement& target) {
  require_same_shape(lam.shape, target.shape, "conjugating_unitary");
  const double scale = std::max({1.0, operator_norm(lam), operator_norm(target)});
  if (hermitian_defect(lam) > 1e-10 * scale || hermitian_defect(target) > 1e-10 * scale)
    throw Error(ErrorKind::NotHermitian, "conjugating_unitary");
  bool equal = true;
  for (std::size_t j = 0; j < lam.blocks.size(); ++j)
    equal = equal && (lam.blocks[j] - target.blocks[j]).norm() <= 1e-14 * scale;
  if (equal) return AlgebraElement::identity(lam.shape);

  std::vector<Matrix> blocks;
  for (std::size_t j = 0; j < lam.blocks.size(); ++j) {
    const auto el = hermitian_eigensystem(lam.blocks[j]);
    const auto et = hermitian_eigensystem(target.blocks[j]);
    blocks.push_back(el.vectors * et.vectors.adjoint());
  }
  return {lam.shape, std::move(blocks)};
}

IterationTrace iterate_weak_diagonalization(const ModuleOperator& k, int iterations) {
  if (iterations < 1 || iterations > 40)
    throw Error(ErrorKind::InvalidArgument, "iteration count must lie in [1, 40]");
  const auto positivity = is_strictly_positive(k);
  if (!positivity.strictly_positive)
    throw Error(ErrorKind::NotStrictlyPositive,
                "min eigenvalue " + std::to_string(positivity.min_eigenvalue));
  const AlgebraShape& shape = k.shape;
  const int n = k.n;
  const auto nn = static_cast<std::size_t>(n);

  IterationTrace trace;
  std::vector<AlgebraElement> chain(nn, AlgebraElement::identity(shape));
  std::vector<AlgebraElement> previous;

  for (int step = 1; step <= iterations; ++step) {
    const double eps = std::ldexp(1.0, -step);
    const SnappedOperator snapped = finite_spectrum_approx(k, eps);

    // Eigenvalues of K_n in the chunked eigenbasis of K: exact grid values.
    std::vector<SpectralForm> forms;
    for (int i = 0; i < n; ++i) {
      std::vector<BlockSpectrum> blocks;
      for (int j = 0; j < shape.factor_count(); ++j) {
        const auto d = static_cast<std::size_t>(shape.dim(j));
        const auto& vals = snapped.values[static_cast<std::size_t>(j)];
        blocks.push_back({Matrix::Identity(static_cast<Index>(d), static_cast<Index>(d)),
                          {vals.begin() + static_cast<std::ptrdiff_t>(i * d),
                           vals.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)}});
      }
      forms.push_back(spectral_form_from_blocks(shape, blocks));
    }
    const OrderedFamily ordered = order_all(forms);

    // Eigenvectors of K_n after the ordering exchange: X W.
    std::vector<Matrix> frames;
    for (int j = 0; j < shape.factor_count(); ++j)
      frames.push_back(snapped.bases[static_cast<std::size_t>(j)] *
                       ordered.witness.blocks[static_cast<std::size_t>(j)]);

    IterationStep record{eps, snapped.op, {}, 0.0, operator_norm(snapped.op - k), 0.0};
    std::vector<ModuleVector> rotated;
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const AlgebraElement lambda = ordered.lambdas[ii].reconstruct();
      AlgebraElement bar = lambda;
      if (!previous.empty()) {
        const AlgebraElement pulled = chain[ii].adjoint() * lambda * chain[ii];
        const AlgebraElement u = conjugating_unitary(pulled, previous[ii]);
        chain[ii] = chain[ii] * u;
        bar = u.adjoint() * pulled * u;
        record.step_distance = std::max(record.step_distance, operator_norm(bar - previous[ii]));
      }
      std::vector<Matrix> panels;
      for (int j = 0; j < shape.factor_count(); ++j) {
        const Index d = shape.dim(j);
        panels.push_back(frames[static_cast<std::size_t>(j)].middleCols(i * d, d));
      }
      const ModuleVector xbar = ModuleVector(shape, n, std::move(panels)).times(chain[ii]);
      record.residual =
          std::max(record.residual, module_norm(apply_operator(k, xbar) - xbar.times(bar)));
      record.lambda_bars.push_back(bar);
      rotated.push_back(xbar);
    }
    previous = record.lambda_bars;
    trace.final_residual = record.residual;
    trace.eigenvectors = std::move(rotated);
    trace.steps.push_back(std::move(record));
  }
  trace.limits = previous;
  return trace;
}

std::vector<SpectralForm> random_spectral_family(SplitMix64& rng, const AlgebraShape& shape,
                                                 int count, int levels) {
  std::vector<SpectralForm> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> pool;
    for (int l = 0; l < levels; ++l) pool.push_back(std::floor(rng.uniform(0.0, 32.0)) / 8.0);
    std::vector<BlockSpectrum> blocks;
    for (int k : shape.dims()) {
      BlockSpectrum bs{random_unitary_matrix(rng, k), {}};
      for (int c = 0; c < k; ++c)
        bs.values.push_back(pool[static_cast<std::size_t>(rng.next() % pool.size())]);
      std::vector<Index> order(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) {
        return bs.values[static_cast<std::size_t>(l)] > bs.values[static_cast<std::size_t>(r)];
      });
      BlockSpectrum sorted{Matrix(k, k), {}};
      for (Index c = 0; c < k; ++c) {
        sorted.basis.col(c) = bs.basis.col(order[static_cast<std::size_t>(c)]);
        sorted.values.push_back(bs.values[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])]);
      }
      blocks.push_back(std::move(sorted));
    }
    out.push_back(spectral_form_from_blocks(shape, blocks));
  }
  return out;
}

}  // namespace modspec
