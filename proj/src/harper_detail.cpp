#include "harper_detail.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>

#include "modspec/error.hpp"

namespace modspec {

double OperatorField::k1(std::size_t point) const {
  const auto n = static_cast<std::size_t>(grid_size);
  return 2.0 * std::numbers::pi * static_cast<double>(point / n) / grid_size;
}

double OperatorField::k2(std::size_t point) const {
  const auto n = static_cast<std::size_t>(grid_size);
  return 2.0 * std::numbers::pi * static_cast<double>(point % n) / grid_size;
}

Matrix harper_matrix(int p, int q, double k1, double k2) {
  Matrix h = Matrix::Zero(q, q);
  for (int m = 0; m < q; ++m)
    h(m, m) = 2.0 * std::cos(k2 + 2.0 * std::numbers::pi * p * m / q);
  for (int m = 0; m + 1 < q; ++m) {
    h(m, m + 1) = 1.0;
    h(m + 1, m) = 1.0;
  }
  const Complex corner = std::polar(1.0, k1);
  h(0, q - 1) += corner;
  h(q - 1, 0) += std::conj(corner);
  return h;
}

OperatorField constant_field(const Matrix& m, int grid_size) {
  if (grid_size < 4) throw Error(ErrorKind::GridTooSmall, "grid must be at least 4x4");
  if (hermitian_defect(m) > 1e-12) throw Error(ErrorKind::NotHermitian, "constant field");
  const auto points = static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size);
  return {static_cast<int>(m.rows()), grid_size, std::vector<Matrix>(points, m)};
}

namespace detail {

void check_flux(int p, int q, int grid_size) {
  if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
    throw Error(ErrorKind::BadFlux, "flux needs gcd(p, q) = 1 and 1 <= p < q");
  if (grid_size < 4) throw Error(ErrorKind::GridTooSmall, "grid must be at least 4x4");
}

void check_field(const OperatorField& field) {
  const auto n = static_cast<std::size_t>(field.grid_size);
  if (field.grid_size < 4) throw Error(ErrorKind::GridTooSmall, "grid must be at least 4x4");
  if (field.matrices.size() != n * n)
    throw Error(ErrorKind::ShapeMismatch, "field is not a complete grid");
  for (const auto& m : field.matrices)
    if (m.rows() != field.q || m.cols() != field.q || hermitian_defect(m) > 1e-12)
      throw Error(ErrorKind::NotHermitian, "field matrix is not a Hermitian q x q matrix");
}

void fiber_bands(const Matrix& h, double* out) {
  const auto es = hermitian_eigensystem(h);
  std::copy(es.values.begin(), es.values.end(), out);
}

namespace {

std::array<std::size_t, 2> forward_neighbours(int grid_size, std::size_t point) {
  const auto n = static_cast<std::size_t>(grid_size);
  const std::size_t i1 = point / n;
  const std::size_t i2 = point % n;
  return {((i1 + 1) % n) * n + i2, i1 * n + (i2 + 1) % n};
}

}  // namespace

double band_jump(const std::vector<double>& values, int q, int grid_size, std::size_t point) {
  const auto qq = static_cast<std::size_t>(q);
  double jump = 0.0;
  for (std::size_t other : forward_neighbours(grid_size, point))
    for (std::size_t b = 0; b < qq; ++b)
      jump = std::max(jump, std::abs(values[point * qq + b] - values[other * qq + b]));
  return jump;
}

EdgeStats edge_stats(const OperatorField& field, const std::vector<double>& values,
                     std::size_t point) {
  const auto qq = static_cast<std::size_t>(field.q);
  EdgeStats s;
  for (std::size_t other : forward_neighbours(field.grid_size, point)) {
    double jump = 0.0;
    for (std::size_t b = 0; b < qq; ++b)
      jump = std::max(jump, std::abs(values[point * qq + b] - values[other * qq + b]));
    const double dh = spectral_norm(field.matrices[point] - field.matrices[other]);
    s.band_jump = std::max(s.band_jump, jump);
    s.field_jump = std::max(s.field_jump, dh);
    s.weyl_slack = std::max(s.weyl_slack, jump - dh);
  }
  return s;
}

std::vector<Degeneracy> find_degeneracies(const std::vector<double>& values, int q,
                                          double gap_tol) {
  const auto qq = static_cast<std::size_t>(q);
  std::vector<Degeneracy> out;
  for (std::size_t point = 0; point * qq < values.size(); ++point)
    for (std::size_t b = 0; b + 1 < qq; ++b) {
      const double gap = values[point * qq + b] - values[point * qq + b + 1];
      if (gap < gap_tol) out.push_back({point, static_cast<int>(b), gap});
    }
  return out;
}

SelectionReport assemble_report(const OperatorField& field, const BandSystem& bands,
                                const std::vector<EdgeStats>& edges) {
  SelectionReport r{};
  r.grid_spacing = 2.0 * std::numbers::pi / field.grid_size;
  double field_jump = 0.0;
  r.weyl_slack = -std::numeric_limits<double>::infinity();
  for (const auto& e : edges) {
    field_jump = std::max(field_jump, e.field_jump);
    r.weyl_slack = std::max(r.weyl_slack, e.weyl_slack);
  }
  r.lipschitz = field_jump / r.grid_spacing;
  r.modulus = bands.modulus;
  r.certificate_bound = r.lipschitz * r.grid_spacing + 1e-9;
  r.continuity_ok = r.modulus <= r.certificate_bound;
  r.degeneracies = bands.degeneracies;

  std::vector<double> sorted = bands.values;
  std::sort(sorted.begin(), sorted.end());
  r.value_count = sorted.size();
  r.spectrum_min = sorted.front();
  r.spectrum_max = sorted.back();
  r.min_max_defect = std::abs(r.spectrum_min + r.spectrum_max);
  double hausdorff = 0.0;
  for (double v : sorted) {
    const double target = -v;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), target);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = std::min(best, std::abs(*it - target));
    if (it != sorted.begin()) best = std::min(best, std::abs(*std::prev(it) - target));
    hausdorff = std::max(hausdorff, best);
  }
  r.symmetry_defect = hausdorff;
  return r;
}

std::vector<std::pair<int, int>> reduced_fluxes(int qmax) {
  std::vector<std::pair<int, int>> out;
  for (int q = 2; q <= qmax; ++q)
    for (int p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}

std::vector<double> distinct_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace detail
}  // namespace modspec
