#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "modspec/diagonalize.hpp"
#include "modspec/error.hpp"

using namespace modspec;

namespace {

ModuleOperator diag_operator(const AlgebraShape& s, int n, const std::vector<std::vector<double>>& entries) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < s.factor_count(); ++j) {
    const auto& e = entries[static_cast<std::size_t>(j)];
    Matrix b = Matrix::Zero(static_cast<Index>(e.size()), static_cast<Index>(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) b(static_cast<Index>(i), static_cast<Index>(i)) = e[i];
    blocks.push_back(b);
  }
  return ModuleOperator(s, n, blocks);
}

// Oracle for the spectral scale: sort all eigenvalues from an independent solver
// ascending and walk the cumulative tau-bar weight directly.
double scale_oracle(const ModuleOperator& k, double alpha) {
  std::vector<std::pair<double, double>> atoms;
  for (int j = 0; j < k.shape.factor_count(); ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(k.blocks[static_cast<std::size_t>(j)]);
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      atoms.emplace_back(es.eigenvalues()(i), k.shape.weight(j) / k.shape.dim(j));
  }
  std::sort(atoms.begin(), atoms.end());
  double cum = 0.0;
  for (const auto& [v, w] : atoms) {
    cum += w;
    if (cum >= alpha - 1e-12) return v;
  }
  return atoms.back().first;
}

}  // namespace

TEST_CASE("diag(3,1) over C") {
  const AlgebraShape s({1});
  const auto d = diagonalize(diag_operator(s, 2, {{3.0, 1.0}}));
  CHECK(d.eigenvalues[0].blocks[0](0, 0).real() == doctest::Approx(3.0));
  CHECK(d.eigenvalues[1].blocks[0](0, 0).real() == doctest::Approx(1.0));
  CHECK(d.ordering_margins[0][0] == doctest::Approx(2.0));
  CHECK(d.residual < 1e-14);
}

TEST_CASE("diag(4,3,2,1) over M2") {
  const AlgebraShape s({2});
  const auto d = diagonalize(diag_operator(s, 2, {{1.0, 3.0, 4.0, 2.0}}));
  CHECK(block_eigenvalues(d.eigenvalues[0], 0) == std::vector<double>{4.0, 3.0});
  CHECK(block_eigenvalues(d.eigenvalues[1], 0) == std::vector<double>{2.0, 1.0});
  CHECK(d.ordering_margins[0][0] == doctest::Approx(1.0));
}

TEST_CASE("ordering margins by hand") {
  const AlgebraShape s({2});
  const auto l = [&](double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return AlgebraElement(s, {m});
  };
  CHECK(ordering_margins({l(5, 1), l(3, 2)})[0][0] == doctest::Approx(-2.0));
  const AlgebraShape c({1});
  CHECK(ordering_margins({AlgebraElement::scalar(c, 2.0), AlgebraElement::scalar(c, 1.0)})[0][0] ==
        doctest::Approx(1.0));
}

TEST_CASE("random diagonalizations") {
  SplitMix64 rng(21);
  for (const auto& s : {AlgebraShape({1}), AlgebraShape({3}), AlgebraShape({2, 3}, {0.2, 0.8})}) {
    for (int n : {1, 2, 4}) {
      const auto k = random_positive_operator(rng, s, n);
      const auto d = diagonalize(k);
      CHECK(orthonormality_defect(d.eigenvectors) < 1e-10);
      CHECK(d.residual < 1e-10 * (1 + operator_norm(k)));
      CHECK(operator_norm(reconstruct(d) - k) < 1e-10 * (1 + operator_norm(k)));
      for (const auto& b : d.ordering_margins)
        for (double m : b) CHECK(m >= -1e-12);
      // Tail compression: after the top i eigenvectors the norm is the top of lambda_{i+1}.
      for (int i = 1; i < n; ++i) {
        const std::vector<ModuleVector> head(d.eigenvectors.begin(), d.eigenvectors.begin() + i);
        CHECK(std::abs(tail_norm(k, head) - operator_norm(d.eigenvalues[static_cast<std::size_t>(i)])) < 1e-9);
      }
    }
  }
}

TEST_CASE("diagonalize rejects non-positive input") {
  const AlgebraShape s({1});
  CHECK_THROWS_AS(diagonalize(diag_operator(s, 2, {{1.0, 0.0}})), Error);
  DiagonalizeOptions semi;
  semi.allow_semidefinite = true;
  CHECK_NOTHROW(diagonalize(diag_operator(s, 2, {{1.0, 0.0}}), semi));
  CHECK_THROWS_AS(diagonalize(diag_operator(s, 2, {{1.0, -1.0}})), Error);
}

TEST_CASE("spectral scale against a sorted-eigenvalue oracle") {
  SplitMix64 rng(22);
  const AlgebraShape s({2, 3}, {0.3, 0.7});
  const auto k = random_hermitian_operator(rng, s, 2);
  const auto scale = spectral_scale(k);
  CHECK(scale.total_weight() == doctest::Approx(2.0));
  for (int t = 1; t <= 200; ++t) {
    const double alpha = 2.0 * t / 200.0;
    CHECK(scale.evaluate(alpha) == doctest::Approx(scale_oracle(k, alpha)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(scale.evaluate(0.0), Error);
  CHECK_THROWS_AS(scale.evaluate(2.5), Error);
}

TEST_CASE("minimax oracle examples") {
  const AlgebraShape s({3});
  const auto k = diag_operator(s, 1, {{1.0, 2.0, 3.0}});
  CHECK(minimax_oracle(k, 1.0 / 3.0) == doctest::Approx(1.0));
  CHECK(minimax_oracle(k, 1.0) == doctest::Approx(3.0));
  CHECK(spectral_scale(k).evaluate(1.0 / 3.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(minimax_oracle(ModuleOperator::identity(AlgebraShape({4}), 4), 1.0), Error);
}

TEST_CASE("finite spectrum approximation") {
  const AlgebraShape s({1});
  const auto snapped = finite_spectrum_approx(diag_operator(s, 2, {{0.3, 1.4}}), 0.5);
  CHECK(snapped.op.blocks[0](0, 0).real() == doctest::Approx(0.5));
  CHECK(snapped.op.blocks[0](1, 1).real() == doctest::Approx(1.5));
  const auto on_grid = diag_operator(s, 2, {{0.5, 2.0}});
  CHECK(operator_norm(finite_spectrum_approx(on_grid, 0.5).op - on_grid) < 1e-15);
  CHECK_THROWS_AS(finite_spectrum_approx(on_grid, 0.0), Error);
  SplitMix64 rng(23);
  const auto k = random_positive_operator(rng, AlgebraShape({2, 3}), 3);
  for (double eps : {0.5, 0.01, 1e-6})
    CHECK(operator_norm(finite_spectrum_approx(k, eps).op - k) <= eps + 1e-9);
}

TEST_CASE("scalar refinement") {
  const AlgebraShape s({1});
  const auto pp = common_refinement(diag_operator(s, 2, {{3.0, 1.0}}), diag_operator(s, 2, {{2.9, 1.1}}));
  REQUIRE(pp.traces.size() == 2);
  CHECK(pp.traces[0] == doctest::Approx(1.0));
  CHECK(pp.traces[1] == doctest::Approx(1.0));
  const auto u = pairing_unitary(pp);
  CHECK(operator_norm(u - ModuleOperator::identity(s, 2)) < 1e-15);
}

TEST_CASE("random refinements satisfy the partition checks") {
  SplitMix64 rng(24);
  for (const auto& s : {AlgebraShape({2}), AlgebraShape({2, 3})}) {
    for (int t = 0; t < 10; ++t) {
      auto k1 = random_positive_operator(rng, s, 3);
      auto k2 = random_positive_operator(rng, s, 3);
      if (t % 2) k2 = finite_spectrum_approx(k2, 0.5).op;  // degenerate clusters
      const auto pp = common_refinement(k1, k2);
      const auto defects = check_partition(pp);
      CHECK(defects.partition_of_unity < 1e-9);
      CHECK(defects.orthogonality < 1e-9);
      CHECK(defects.trace_match < 1e-12);
      CHECK(defects.subordination < 1e-9);
      CHECK(defects.total_trace_error < 1e-12);
      const auto u = pairing_unitary(pp);
      CHECK(operator_norm(u.adjoint() * u - ModuleOperator::identity(s, 3)) < 1e-9);
      for (std::size_t m = 0; m < pp.parts1.size(); ++m)
        CHECK(operator_norm(u * pp.parts2[m] * u.adjoint() - pp.parts1[m]) < 1e-9);
    }
  }
}

TEST_CASE("self refinement uses the identity") {
  SplitMix64 rng(25);
  const AlgebraShape s({2});
  const auto k = random_positive_operator(rng, s, 2);
  const auto pp = common_refinement(k, k);
  CHECK(operator_norm(pairing_unitary(pp) - ModuleOperator::identity(s, 2)) == 0.0);
}

TEST_CASE("perturbation matching") {
  SplitMix64 rng(26);
  const AlgebraShape s({2, 1});
  const auto k1 = random_positive_operator(rng, s, 2);
  const auto same = match_eigenvalues(k1, k1);
  CHECK(same.max_pair_bound < 1e-12);
  const double delta = 0.05;
  const auto shifted = match_eigenvalues(k1, k1 + ModuleOperator::identity(s, 2).scaled(delta));
  for (double b : shifted.pair_bounds) CHECK(b == doctest::Approx(delta).epsilon(1e-9));
  const auto h = random_hermitian_operator(rng, s, 2);
  auto k2 = k1 + h.scaled(1e-3 / operator_norm(h));
  k2 = (k2 + k2.adjoint()).scaled(0.5);
  const auto r = match_eigenvalues(k1, k2);
  CHECK(r.max_pair_bound <= r.delta + 1e-8);
  CHECK(r.conjugation_defect <= r.delta + 1e-8);
}
