#include "modspec/diagonalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "modspec/error.hpp"

namespace modspec {

namespace {

void require_hermitian(const ModuleOperator& k, const char* where) {
  const double scale = std::max(1.0, operator_norm(k));
  if (hermitian_defect(k) > 1e-10 * scale) throw Error(ErrorKind::NotHermitian, where);
}

std::vector<Eigensystem> block_systems(const ModuleOperator& k) {
  std::vector<Eigensystem> systems;
  try {
    for (const auto& b : k.blocks) systems.push_back(hermitian_eigensystem(b));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoConvergence) throw Error(ErrorKind::SolverFailure, e.what());
    throw;
  }
  return systems;
}

}  // namespace

std::vector<double> block_eigenvalues(const AlgebraElement& lambda, int block) {
  return hermitian_eigensystem(lambda.blocks[static_cast<std::size_t>(block)]).values;
}

std::vector<std::vector<double>> ordering_margins(const std::vector<AlgebraElement>& lams) {
  if (lams.empty()) return {};
  const AlgebraShape& shape = lams.front().shape;
  for (const auto& l : lams) require_same_shape(shape, l.shape, "ordering_margins");
  std::vector<std::vector<double>> margins(static_cast<std::size_t>(shape.factor_count()));
  for (int j = 0; j < shape.factor_count(); ++j) {
    std::vector<std::vector<double>> spectra;
    for (const auto& l : lams) spectra.push_back(block_eigenvalues(l, j));
    for (std::size_t i = 0; i + 1 < lams.size(); ++i)
      margins[static_cast<std::size_t>(j)].push_back(spectra[i].back() - spectra[i + 1].front());
  }
  return margins;
}

Diagonalization diagonalize(const ModuleOperator& k, const DiagonalizeOptions& options) {
  const auto positivity = is_strictly_positive(k, options.positivity_tol);
  if (!positivity.strictly_positive) {
    const bool semidefinite_ok = options.allow_semidefinite &&
                                 positivity.hermitian_defect <= options.positivity_tol &&
                                 positivity.min_eigenvalue >= -options.positivity_tol;
    if (!semidefinite_ok)
      throw Error(ErrorKind::NotStrictlyPositive,
                  "min eigenvalue " + std::to_string(positivity.min_eigenvalue));
  }
  const auto systems = block_systems(k);
  const AlgebraShape& shape = k.shape;

  Diagonalization d;
  for (int i = 0; i < k.n; ++i) {
    std::vector<Matrix> panels, lambda;
    for (int j = 0; j < shape.factor_count(); ++j) {
      const Index dim = shape.dim(j);
      const auto& es = systems[static_cast<std::size_t>(j)];
      panels.push_back(es.vectors.middleCols(i * dim, dim));
      Matrix diag = Matrix::Zero(dim, dim);
      for (Index c = 0; c < dim; ++c) diag(c, c) = es.values[static_cast<std::size_t>(i * dim + c)];
      lambda.push_back(std::move(diag));
    }
    d.eigenvectors.emplace_back(shape, k.n, std::move(panels));
    d.eigenvalues.emplace_back(shape, std::move(lambda));
  }
  d.ordering_margins = ordering_margins(d.eigenvalues);
  for (int i = 0; i < k.n; ++i) {
    const auto& x = d.eigenvectors[static_cast<std::size_t>(i)];
    const ModuleVector r =
        apply_operator(k, x) - x.times(d.eigenvalues[static_cast<std::size_t>(i)]);
    d.residual = std::max(d.residual, module_norm(r));
  }
  return d;
}

ModuleOperator reconstruct(const Diagonalization& d) {
  const auto& first = d.eigenvectors.front();
  ModuleOperator k = ModuleOperator::zero(first.shape, first.n);
  for (std::size_t i = 0; i < d.eigenvectors.size(); ++i)
    k = k + theta_operator(d.eigenvectors[i].times(d.eigenvalues[i]), d.eigenvectors[i]);
  return k;
}

SpectralScale::SpectralScale(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& l, const Atom& r) { return l.value < r.value; });
  double sum = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.weight > 0.0)) throw Error(ErrorKind::InvalidArgument, "atom weight must be positive");
    sum += a.weight;
    cumulative_.push_back(sum);
  }
}

double SpectralScale::evaluate(double alpha) const {
  const double total = total_weight();
  const double tol = 1e-12 * std::max(1.0, total);
  if (!(alpha > 0.0) || alpha > total + tol)
    throw Error(ErrorKind::InvalidArgument, "alpha outside (0, n]");
  // First atom whose inclusive cumulative weight reaches alpha: just above its
  // value the spectral projection E(-inf, lambda) has trace >= alpha.
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), alpha - tol);
  const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(), static_cast<std::ptrdiff_t>(atoms_.size()) - 1));
  return atoms_[idx].value;
}

SpectralScale spectral_scale(const ModuleOperator& k) {
  require_hermitian(k, "spectral_scale");
  const auto systems = block_systems(k);
  std::vector<SpectralScale::Atom> atoms;
  for (int j = 0; j < k.shape.factor_count(); ++j) {
    const double w = k.shape.weight(j) / k.shape.dim(j);
    for (double v : systems[static_cast<std::size_t>(j)].values) atoms.push_back({w, v});
  }
  return SpectralScale(std::move(atoms));
}

MinimaxProfile::MinimaxProfile(const ModuleOperator& k, long subspace_budget) {
  require_hermitian(k, "minimax_oracle");
  struct Vec {
    int block;
    Index column;
    double weight;
  };
  std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> solvers;
  std::vector<Vec> vecs;
  for (int j = 0; j < k.shape.factor_count(); ++j) {
    const Matrix& b = k.blocks[static_cast<std::size_t>(j)];
    solvers.emplace_back(0.5 * (b + b.adjoint()));
    for (Index c = 0; c < b.rows(); ++c) vecs.push_back({j, c, k.shape.weight(j) / k.shape.dim(j)});
  }
  const auto dim = vecs.size();
  if (dim > 12) throw Error(ErrorKind::TooLarge, "oracle limited to total dimension 12");
  const long subsets = 1L << dim;
  if (subsets > subspace_budget) throw Error(ErrorKind::TooLarge, "subset budget exceeded");
  tol_ = 1e-12 * std::max(1.0, static_cast<double>(k.n));

  for (long mask = 1; mask < subsets; ++mask) {
    double trace = 0.0;
    for (std::size_t v = 0; v < dim; ++v)
      if (mask & (1L << v)) trace += vecs[v].weight;
    double top = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < k.shape.factor_count(); ++j) {
      std::vector<Index> cols;
      for (std::size_t v = 0; v < dim; ++v)
        if ((mask & (1L << v)) && vecs[v].block == j) cols.push_back(vecs[v].column);
      if (cols.empty()) continue;
      const Matrix& ev = solvers[static_cast<std::size_t>(j)].eigenvectors();
      Matrix basis(ev.rows(), static_cast<Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) basis.col(static_cast<Index>(c)) = ev.col(cols[c]);
      const Matrix compressed = basis.adjoint() * k.blocks[static_cast<std::size_t>(j)] * basis;
      Eigen::SelfAdjointEigenSolver<Matrix> sub(0.5 * (compressed + compressed.adjoint()),
                                                Eigen::EigenvaluesOnly);
      top = std::max(top, sub.eigenvalues().maxCoeff());
    }
    subspaces_.push_back({trace, top});
  }
}

double MinimaxProfile::query(double alpha) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : subspaces_)
    if (s.trace >= alpha - tol_) best = std::min(best, s.top);
  return best;
}

double minimax_oracle(const ModuleOperator& k, double alpha, long subspace_budget) {
  return MinimaxProfile(k, subspace_budget).query(alpha);
}

SnappedOperator finite_spectrum_approx(const ModuleOperator& k, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::NonPositiveEps, "eps must be positive");
  require_hermitian(k, "finite_spectrum_approx");
  const auto systems = block_systems(k);
  const double scale = std::max(1.0, operator_norm(k));
  SnappedOperator out{ModuleOperator::zero(k.shape, k.n), {}, {}};
  for (std::size_t j = 0; j < systems.size(); ++j) {
    const auto& es = systems[j];
    if (es.values.back() < -1e-10 * scale)
      throw Error(ErrorKind::NotStrictlyPositive, "finite_spectrum_approx needs positive K");
    std::vector<double> snapped;
    for (double v : es.values) {
      const double ratio = v / eps;
      const double nearest = std::round(ratio);
      double m = std::abs(ratio - nearest) <= 1e-9 ? nearest : std::ceil(ratio);
      m = std::max(m, 1.0);
      snapped.push_back(m * eps);
    }
    Eigen::VectorXcd diag(static_cast<Index>(snapped.size()));
    for (std::size_t c = 0; c < snapped.size(); ++c) diag(static_cast<Index>(c)) = snapped[c];
    Matrix block = es.vectors * diag.asDiagonal() * es.vectors.adjoint();
    out.op.blocks[j] = 0.5 * (block + block.adjoint());
    out.bases.push_back(es.vectors);
    out.values.push_back(std::move(snapped));
  }
  return out;
}

namespace {

// Eigen-data of both operators in a refinement: per block eigensystem plus the
// global spectral-cluster id (descending value order) of every column.
struct ClusteredSpectrum {
  std::vector<Eigensystem> systems;
  std::vector<std::vector<int>> cluster;
  int cluster_count = 0;
};

ClusteredSpectrum cluster_spectrum(const ModuleOperator& k, double cluster_tol) {
  require_hermitian(k, "spectral clustering");
  ClusteredSpectrum cs;
  cs.systems = block_systems(k);
  struct Entry {
    double value;
    std::size_t block;
    std::size_t column;
  };
  std::vector<Entry> entries;
  for (std::size_t j = 0; j < cs.systems.size(); ++j) {
    cs.cluster.emplace_back(cs.systems[j].values.size(), -1);
    for (std::size_t c = 0; c < cs.systems[j].values.size(); ++c)
      entries.push_back({cs.systems[j].values[c], j, c});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& l, const Entry& r) { return l.value > r.value; });
  int id = -1;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (e == 0 || entries[e - 1].value - entries[e].value >= cluster_tol) ++id;
    cs.cluster[entries[e].block][entries[e].column] = id;
  }
  cs.cluster_count = id + 1;
  return cs;
}

ModuleOperator single_block_projection(const AlgebraShape& shape, int n, int block,
                                       const Matrix& basis) {
  ModuleOperator p = ModuleOperator::zero(shape, n);
  p.blocks[static_cast<std::size_t>(block)] = basis * basis.adjoint();
  return p;
}

std::vector<ModuleOperator> cluster_projections(const ModuleOperator& k,
                                                const ClusteredSpectrum& cs) {
  std::vector<ModuleOperator> out(static_cast<std::size_t>(cs.cluster_count),
                                  ModuleOperator::zero(k.shape, k.n));
  for (std::size_t j = 0; j < cs.systems.size(); ++j)
    for (std::size_t c = 0; c < cs.cluster[j].size(); ++c) {
      const auto col = cs.systems[j].vectors.col(static_cast<Index>(c));
      out[static_cast<std::size_t>(cs.cluster[j][c])].blocks[j] += col * col.adjoint();
    }
  return out;
}

std::vector<ModuleOperator> chunk_projections(const ModuleOperator& k,
                                              const ClusteredSpectrum& cs) {
  std::vector<ModuleOperator> out;
  for (int i = 0; i < k.n; ++i) {
    ModuleOperator q = ModuleOperator::zero(k.shape, k.n);
    for (int j = 0; j < k.shape.factor_count(); ++j) {
      const Index d = k.shape.dim(j);
      const auto panel = cs.systems[static_cast<std::size_t>(j)].vectors.middleCols(i * d, d);
      q.blocks[static_cast<std::size_t>(j)] = panel * panel.adjoint();
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::vector<ModuleOperator> spectral_projections(const ModuleOperator& k, double cluster_tol) {
  return cluster_projections(k, cluster_spectrum(k, cluster_tol));
}

PairedPartition common_refinement(const ModuleOperator& k1, const ModuleOperator& k2,
                                  double cluster_tol) {
  require_same_module(k1.shape, k1.n, k2.shape, k2.n, "common_refinement");
  const AlgebraShape& shape = k1.shape;
  const int n = k1.n;
  const ClusteredSpectrum cs1 = cluster_spectrum(k1, cluster_tol);
  const ClusteredSpectrum cs2 = cluster_spectrum(k2, cluster_tol);

  PairedPartition pp{shape, n, {}, {}, {}, {}, {}, {}, {}, {},
                     cluster_projections(k1, cs1), cluster_projections(k2, cs2),
                     chunk_projections(k1, cs1), chunk_projections(k2, cs2)};

  for (int j = 0; j < shape.factor_count(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const Index d = shape.dim(j);
    const Index total = static_cast<Index>(n) * d;
    // Breakpoints are ranks inside the block: integer multiples of w_j / k_j in
    // tau-bar, so merging them is exact.
    std::vector<Index> cuts{0, total};
    for (Index c = d; c < total; c += d) cuts.push_back(c);
    for (Index c = 1; c < total; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      if (cs1.cluster[jj][cc] != cs1.cluster[jj][cc - 1]) cuts.push_back(c);
      if (cs2.cluster[jj][cc] != cs2.cluster[jj][cc - 1]) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Index covered = 0;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
      const Index begin = cuts[t];
      const Index len = cuts[t + 1] - begin;
      const Matrix b1 = cs1.systems[jj].vectors.middleCols(begin, len);
      const Matrix b2 = cs2.systems[jj].vectors.middleCols(begin, len);
      pp.parts1.push_back(single_block_projection(shape, n, j, b1));
      pp.parts2.push_back(single_block_projection(shape, n, j, b2));
      pp.traces.push_back(shape.weight(j) / d * static_cast<double>(len));
      const auto b = static_cast<std::size_t>(begin);
      pp.parents1.push_back({cs1.cluster[jj][b], static_cast<int>(begin / d)});
      pp.parents2.push_back({cs2.cluster[jj][b], static_cast<int>(begin / d)});
      pp.part_block.push_back(j);
      pp.bases1.push_back(b1);
      pp.bases2.push_back(b2);
      covered += len;
    }
    if (covered != total)
      throw Error(ErrorKind::TraceMismatchUnresolvable,
                  "refinement does not cover block " + std::to_string(j));
  }
  return pp;
}

ModuleOperator pairing_unitary(const PairedPartition& pp) {
  const std::size_t parts = pp.parts1.size();
  if (pp.parts2.size() != parts || pp.bases1.size() != parts || pp.bases2.size() != parts ||
      pp.part_block.size() != parts)
    throw Error(ErrorKind::InvalidPartition, "part lists have different lengths");
  std::vector<Index> covered(static_cast<std::size_t>(pp.shape.factor_count()), 0);
  for (std::size_t m = 0; m < parts; ++m) {
    const int j = pp.part_block[m];
    if (j < 0 || j >= pp.shape.factor_count())
      throw Error(ErrorKind::InvalidPartition, "part assigned to a missing factor");
    if (pp.bases1[m].cols() != pp.bases2[m].cols())
      throw Error(ErrorKind::InvalidPartition, "paired parts have different ranks");
    covered[static_cast<std::size_t>(j)] += pp.bases1[m].cols();
  }
  for (int j = 0; j < pp.shape.factor_count(); ++j)
    if (covered[static_cast<std::size_t>(j)] != static_cast<Index>(pp.n) * pp.shape.dim(j))
      throw Error(ErrorKind::InvalidPartition, "parts do not sum to the identity");

  ModuleOperator u = ModuleOperator::zero(pp.shape, pp.n);
  bool all_coincide = true;
  for (std::size_t m = 0; m < parts; ++m) {
    const auto j = static_cast<std::size_t>(pp.part_block[m]);
    const Matrix& r1 = pp.parts1[m].blocks[j];
    const Matrix& r2 = pp.parts2[m].blocks[j];
    if ((r1 - r2).norm() <= 1e-12) {
      u.blocks[j] += r1;
    } else {
      all_coincide = false;
      u.blocks[j] += pp.bases1[m] * pp.bases2[m].adjoint();
    }
  }
  if (all_coincide) return ModuleOperator::identity(pp.shape, pp.n);
  return u;
}

PartitionDefects check_partition(const PairedPartition& pp) {
  PartitionDefects d{0, 0, 0, 0, 0};
  const ModuleOperator one = ModuleOperator::identity(pp.shape, pp.n);
  const std::vector<const std::vector<ModuleOperator>*> sides{&pp.parts1, &pp.parts2};
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& parts = *sides[r];
    ModuleOperator sum = ModuleOperator::zero(pp.shape, pp.n);
    double trace_sum = 0.0;
    for (std::size_t m = 0; m < parts.size(); ++m) {
      sum = sum + parts[m];
      trace_sum += tau_bar(parts[m]);
      for (std::size_t l = m + 1; l < parts.size(); ++l)
        if (pp.part_block[l] == pp.part_block[m])
          d.orthogonality = std::max(d.orthogonality, operator_norm(parts[m] * parts[l]));
      const auto& parent = r == 0 ? pp.parents1[m] : pp.parents2[m];
      const auto& spectral = r == 0 ? pp.spectral1 : pp.spectral2;
      const auto& chunks = r == 0 ? pp.chunks1 : pp.chunks2;
      const auto& sp = spectral[static_cast<std::size_t>(parent.spectral)];
      const auto& ch = chunks[static_cast<std::size_t>(parent.chunk)];
      d.subordination = std::max({d.subordination, operator_norm(sp * parts[m] - parts[m]),
                                  operator_norm(ch * parts[m] - parts[m])});
    }
    d.partition_of_unity = std::max(d.partition_of_unity, operator_norm(sum - one));
    d.total_trace_error = std::max(d.total_trace_error, std::abs(trace_sum - pp.n));
  }
  for (std::size_t m = 0; m < pp.parts1.size(); ++m)
    d.trace_match =
        std::max(d.trace_match, std::abs(tau_bar(pp.parts1[m]) - tau_bar(pp.parts2[m])));
  return d;
}

MatchReport match_eigenvalues(const ModuleOperator& k1, const ModuleOperator& k2) {
  require_same_module(k1.shape, k1.n, k2.shape, k2.n, "match_eigenvalues");
  const Diagonalization d1 = diagonalize(k1);
  const Diagonalization d2 = diagonalize(k2);
  const PairedPartition pp = common_refinement(k1, k2);
  const ModuleOperator u = pairing_unitary(pp);

  MatchReport report{u, {}, operator_norm(k1 - k2), operator_norm(u.adjoint() * k1 * u - k2),
                     {}, 0.0, 0.0};
  for (int i = 0; i < k1.n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    report.pairs.emplace_back(d1.eigenvalues[ii], d2.eigenvalues[ii]);
    const double bound = operator_norm(d1.eigenvalues[ii] - d2.eigenvalues[ii]);
    report.pair_bounds.push_back(bound);
    report.max_pair_bound = std::max(report.max_pair_bound, bound);
    const ModuleVector mapped = apply_operator(u, d2.eigenvectors[ii]);
    report.eigenvector_defect = std::max(
        report.eigenvector_defect,
        operator_norm(theta_operator(mapped, mapped) -
                      theta_operator(d1.eigenvectors[ii], d1.eigenvectors[ii])));
  }
  return report;
}

}  // namespace modspec
