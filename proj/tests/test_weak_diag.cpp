#include <doctest.h>

#include <cmath>

#include "modspec/error.hpp"
#include "modspec/weak_diag.hpp"

using namespace modspec;

namespace {

SpectralForm form(const AlgebraShape& s, std::vector<double> diag) {
  Matrix m = Matrix::Zero(static_cast<Index>(diag.size()), static_cast<Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = diag[i];
  return spectral_decomposition(AlgebraElement(s, {m}));
}

double conjugation_defect(const std::vector<SpectralForm>& in, const std::vector<SpectralForm>& out,
                          const ModuleOperator& w) {
  std::vector<AlgebraElement> a, b;
  for (const auto& f : in) a.push_back(f.reconstruct());
  for (const auto& f : out) b.push_back(f.reconstruct());
  return operator_norm(w.adjoint() * ModuleOperator::diagonal(a) * w - ModuleOperator::diagonal(b));
}

}  // namespace

TEST_CASE("scalar swap") {
  const AlgebraShape s({1});
  const auto r = order_pair(form(s, {1.0}), form(s, {2.0}));
  CHECK(r.first.atoms[0].value == 2.0);
  CHECK(r.second.atoms[0].value == 1.0);
  CHECK(std::abs(r.witness.blocks[0](0, 1)) == doctest::Approx(1.0));
  CHECK(conjugation_defect({form(s, {1.0}), form(s, {2.0})}, {r.first, r.second}, r.witness) < 1e-14);
}

TEST_CASE("M2 exchange") {
  const AlgebraShape s({2});
  const auto a = form(s, {5.0, 1.0}), b = form(s, {3.0, 2.0});
  const auto r = order_pair(a, b);
  CHECK(block_multiset(r.first, 0) == std::vector<double>{5.0, 3.0});
  CHECK(block_multiset(r.second, 0) == std::vector<double>{2.0, 1.0});
  CHECK(conjugation_defect({a, b}, {r.first, r.second}, r.witness) < 1e-13);
}

TEST_CASE("ordered pair is a fixed point") {
  const AlgebraShape s({2});
  const auto r = order_pair(form(s, {5.0, 4.0}), form(s, {3.0, 2.0}));
  CHECK(operator_norm(r.witness - ModuleOperator::identity(s, 2)) == 0.0);
}

TEST_CASE("reversed scalar list") {
  const AlgebraShape s({1});
  const auto fam = order_all({form(s, {1.0}), form(s, {2.0}), form(s, {3.0})});
  CHECK(fam.lambdas[0].atoms[0].value == 3.0);
  CHECK(fam.lambdas[1].atoms[0].value == 2.0);
  CHECK(fam.lambdas[2].atoms[0].value == 1.0);
  CHECK(fam.exchanges <= 3);
}

TEST_CASE("order_all matches sort-then-chunk on random families") {
  SplitMix64 rng(31);
  for (const auto& s : {AlgebraShape({2}), AlgebraShape({3}), AlgebraShape({2, 3})}) {
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + t % 3;
      const auto lams = random_spectral_family(rng, s, n, 3);
      const auto fam = order_all(lams);
      const auto oracle = sorted_chunks(lams);
      for (int j = 0; j < s.factor_count(); ++j)
        for (int i = 0; i < n; ++i)
          CHECK(block_multiset(fam.lambdas[static_cast<std::size_t>(i)], j) ==
                oracle[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
      CHECK(conjugation_defect(lams, fam.lambdas, fam.witness) < 1e-9);
    }
  }
}

TEST_CASE("conjugating unitary") {
  SplitMix64 rng(32);
  const AlgebraShape s({3});
  const auto lam = random_hermitian_element(rng, s);
  CHECK(operator_norm(conjugating_unitary(lam, lam) - AlgebraElement::identity(s)) == 0.0);
  const auto v = random_unitary_element(rng, s);
  const auto target = v.adjoint() * lam * v;
  const auto u = conjugating_unitary(lam, target);
  CHECK(operator_norm(u.adjoint() * lam * u - target) < 1e-8);
  const auto shifted = target + AlgebraElement::identity(s).scaled(1e-3);
  const auto u2 = conjugating_unitary(lam, shifted);
  CHECK(operator_norm(u2.adjoint() * lam * u2 - shifted) <= 1e-3 + 1e-8);
}

TEST_CASE("scalar iteration") {
  const AlgebraShape s({1});
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const auto trace = iterate_weak_diagonalization(ModuleOperator(s, 2, {m}), 10);
  CHECK(trace.limits[0].blocks[0](0, 0).real() == doctest::Approx(3.0));
  CHECK(trace.limits[1].blocks[0](0, 0).real() == doctest::Approx(1.0));
  CHECK(trace.final_residual <= std::ldexp(1.0, -8));
  // On-grid spectrum: every step is exact, so the chain never moves.
  for (std::size_t n = 1; n < trace.steps.size(); ++n) CHECK(trace.steps[n].step_distance == 0.0);
}

TEST_CASE("random iteration") {
  SplitMix64 rng(33);
  const auto k = random_positive_operator(rng, AlgebraShape({2, 3}), 2);
  const auto trace = iterate_weak_diagonalization(k, 15);
  REQUIRE(trace.steps.size() == 15);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    CHECK(st.eps == std::ldexp(1.0, -static_cast<int>(i) - 1));
    CHECK(st.approximation_error <= st.eps + 1e-12);
    CHECK(st.residual <= st.eps + 1e-9);
    if (i > 0) CHECK(st.step_distance <= 2.0 * st.eps + 1e-9);
  }
  CHECK(orthonormality_defect(trace.eigenvectors) < 1e-9);
}

TEST_CASE("iteration contract") {
  const AlgebraShape s({1});
  CHECK_THROWS_AS(iterate_weak_diagonalization(ModuleOperator::identity(s, 2), 0), Error);
  CHECK_THROWS_AS(iterate_weak_diagonalization(ModuleOperator::identity(s, 2), 41), Error);
  CHECK_THROWS_AS(iterate_weak_diagonalization(ModuleOperator::zero(s, 2), 5), Error);
}
