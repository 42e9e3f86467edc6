#include <doctest.h>

#include <cmath>

#include "modspec/algebra.hpp"
#include "modspec/error.hpp"

using namespace modspec;

namespace {

AlgebraElement diag_element(const AlgebraShape& s, const std::vector<std::vector<double>>& diag) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < s.factor_count(); ++j) {
    Matrix b = Matrix::Zero(s.dim(j), s.dim(j));
    for (int i = 0; i < s.dim(j); ++i) b(i, i) = diag[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    blocks.push_back(b);
  }
  return AlgebraElement(s, blocks);
}

}  // namespace

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(AlgebraShape({0}), Error);
  CHECK_THROWS_AS(AlgebraShape({2, 3}, {1.0}), Error);
  CHECK_THROWS_AS(AlgebraShape({2}, {-1.0}), Error);
  const AlgebraShape s({2, 3}, {1.0, 3.0});
  CHECK(s.weight(0) == doctest::Approx(0.25));
  CHECK(s.weight(1) == doctest::Approx(0.75));
  CHECK(AlgebraShape({2, 3}) == AlgebraShape({2, 3}, {0.5, 0.5}));
}

TEST_CASE("traces are normalized") {
  const AlgebraShape s({2, 3}, {0.25, 0.75});
  const auto one = AlgebraElement::identity(s);
  CHECK(std::abs(scalar_trace(one) - 1.0) < 1e-15);
  for (auto v : center_trace(one).values) CHECK(std::abs(v - 1.0) < 1e-15);
  // tau(diag) = sum_j w_j * tr_j / k_j.
  const auto a = diag_element(s, {{1.0, 3.0}, {0.0, 0.0, 6.0}});
  CHECK(scalar_trace(a).real() == doctest::Approx(0.25 * 2.0 + 0.75 * 2.0));
  CHECK(center_trace(a).values[1].real() == doctest::Approx(2.0));
}

TEST_CASE("trace is tracial") {
  SplitMix64 rng(1);
  const AlgebraShape s({2, 3});
  const auto a = random_element(rng, s), b = random_element(rng, s);
  CHECK(std::abs(scalar_trace(a * b) - scalar_trace(b * a)) < 1e-13);
}

TEST_CASE("arithmetic") {
  SplitMix64 rng(2);
  const AlgebraShape s({1, 2});
  const auto a = random_element(rng, s), b = random_element(rng, s);
  CHECK(operator_norm(element_arithmetic(a, b, ArithmeticOp::Add) - (a + b)) == 0.0);
  CHECK(operator_norm(element_arithmetic(a, b, ArithmeticOp::Mul) - a * b) == 0.0);
  CHECK(operator_norm(element_arithmetic(a, b, ArithmeticOp::Adjoint) - a.adjoint()) == 0.0);
  CHECK(operator_norm(element_arithmetic(a, b, ArithmeticOp::Scale, 2.0) - a.scaled(2.0)) == 0.0);
  CHECK(operator_norm((a * b).adjoint() - b.adjoint() * a.adjoint()) < 1e-13);
  CHECK_THROWS_AS(a + AlgebraElement::identity(AlgebraShape({2, 1})), Error);
}

TEST_CASE("operator norm is the max over blocks") {
  const AlgebraShape s({1, 2});
  CHECK(operator_norm(diag_element(s, {{-5.0}, {1.0, 2.0}})) == doctest::Approx(5.0));
}

TEST_CASE("spectral decomposition clusters across blocks") {
  const AlgebraShape s({2, 3});
  const auto a = diag_element(s, {{1.0, 2.0}, {2.0, 1.0, 7.0}});
  const auto form = spectral_decomposition(a);
  REQUIRE(form.atoms.size() == 3);
  CHECK(form.atoms[0].value == doctest::Approx(1.0));
  CHECK(form.atoms[2].value == doctest::Approx(7.0));
  CHECK(projection_ranks(form.atoms[1].projection) == std::vector<int>{1, 1});
  CHECK(operator_norm(form.reconstruct() - a) < 1e-14);
  CHECK(block_multiset(form, 1) == std::vector<double>{7.0, 2.0, 1.0});
}

TEST_CASE("spectral form from blocks round trip") {
  SplitMix64 rng(4);
  const AlgebraShape s({2, 3});
  const auto h = random_hermitian_element(rng, s);
  const auto form = spectral_decomposition(h);
  std::vector<BlockSpectrum> blocks;
  for (int j = 0; j < s.factor_count(); ++j) blocks.push_back(block_spectrum(form, j));
  const auto back = spectral_form_from_blocks(s, blocks);
  CHECK(back.atoms.size() == form.atoms.size());
  CHECK(operator_norm(back.reconstruct() - h) < 1e-9);
}

TEST_CASE("validation") {
  SplitMix64 rng(6);
  const AlgebraShape s({3});
  CHECK(validate_element(random_projection(rng, s), ElementKind::Projection, 1e-10).ok);
  CHECK(validate_element(random_unitary_element(rng, s), ElementKind::Unitary, 1e-10).ok);
  CHECK(!validate_element(AlgebraElement::scalar(s, -1.0), ElementKind::Positive, 1e-10).ok);
  CHECK(!validate_element(AlgebraElement::scalar(s, 2.0), ElementKind::Projection, 1e-10).ok);
}

TEST_CASE("equivalent subprojection witness") {
  SplitMix64 rng(8);
  for (const auto& s : {AlgebraShape({1}), AlgebraShape({3}), AlgebraShape({2, 3})}) {
    for (int t = 0; t < 20; ++t) {
      const auto p = random_projection(rng, s), q = random_projection(rng, s);
      const auto w = equivalent_subprojections(p, q);
      const auto rp = projection_ranks(w.r_p), pp = projection_ranks(p), qq = projection_ranks(q);
      for (std::size_t j = 0; j < rp.size(); ++j) CHECK(rp[j] == std::min(pp[j], qq[j]));
      CHECK(operator_norm(p * w.r_p - w.r_p) < 1e-9);
      CHECK(operator_norm(q * w.r_q - w.r_q) < 1e-9);
      CHECK(operator_norm(w.v.adjoint() * w.v - w.r_p) < 1e-9);
      CHECK(operator_norm(w.v * w.v.adjoint() - w.r_q) < 1e-9);
    }
  }
}

TEST_CASE("non-projection input is rejected") {
  const AlgebraShape s({2});
  CHECK_THROWS_AS(equivalent_subprojections(AlgebraElement::scalar(s, 0.5), AlgebraElement::identity(s)), Error);
}
