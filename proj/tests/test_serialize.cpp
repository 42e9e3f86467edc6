#include <doctest.h>

#include <cmath>

#include "modspec/error.hpp"
#include "modspec/serialize.hpp"

using namespace modspec;

TEST_CASE("17 significant digits, no locale") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse_json("{\"a\": [1, 2,}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("operator round trip is byte-identical") {
  SplitMix64 rng(41);
  const auto k = random_positive_operator(rng, AlgebraShape({2, 3}, {0.25, 0.75}), 3);
  const std::string first = dump_json(to_json(k));
  const auto back = operator_from_json(parse_json(first));
  CHECK(operator_norm(back - k) == 0.0);
  CHECK(dump_json(to_json(back)) == first);
}

TEST_CASE("diagonalization round trip") {
  SplitMix64 rng(42);
  const auto k = random_positive_operator(rng, AlgebraShape({2}), 2);
  const auto d = diagonalize(k);
  const std::string first = dump_json(to_json(d));
  const auto back = diagonalization_from_json(parse_json(first));
  CHECK(dump_json(to_json(back)) == first);
  CHECK(operator_norm(reconstruct(back) - k) < 1e-10);
  CHECK(orthonormality_defect(back.eigenvectors) < 1e-10);
}

TEST_CASE("false hermitian flag is rejected") {
  Json j = to_json(ModuleOperator::identity(AlgebraShape({1}), 2));
  j["blocks"][0][0][1] = Json::array({1.0, 0.0});
  j["hermitian"] = true;
  CHECK_THROWS_AS(operator_from_json(j), Error);
}

TEST_CASE("shape validation on load") {
  CHECK_THROWS_AS(shape_from_json(parse_json("{\"dims\": [0]}")), Error);
  CHECK_THROWS_AS(operator_from_json(parse_json("{\"shape\": {\"dims\": [2]}, \"n\": 1, \"blocks\": []}")), Error);
}

TEST_CASE("CSV formats") {
  const auto field = harper_field(1, 2, 4);
  const auto csv = bands_csv(field, band_functions(field));
  CHECK(csv.rfind("k1,k2,band_index,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 4 * 2);
  CHECK(butterfly_csv({{1, 2, 0.5}}) == "p,q,value\n1,2,0.5\n");
  const AlgebraShape s({1});
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const auto scale = scale_csv(spectral_scale(ModuleOperator(s, 2, {m})));
  CHECK(scale.rfind("alpha,epsilon\n", 0) == 0);
  CHECK(scale.find("\n2,3\n") != std::string::npos);
}

TEST_CASE("dump is deterministic") {
  SplitMix64 a(7), b(7);
  const auto s = AlgebraShape({3});
  CHECK(dump_json(to_json(iterate_weak_diagonalization(random_positive_operator(a, s, 2), 6))) ==
        dump_json(to_json(iterate_weak_diagonalization(random_positive_operator(b, s, 2), 6))));
}
