#include <algorithm>
#include <exception>

#include "harper_detail.hpp"
#include "modspec/error.hpp"
#include "modspec/parallel.hpp"

namespace modspec {

OperatorField harper_field(int p, int q, int grid_size) {
  detail::check_flux(p, q, grid_size);
  const auto n = static_cast<std::size_t>(grid_size);
  OperatorField field{q, grid_size, std::vector<Matrix>(n * n)};
  const auto points = static_cast<long>(n * n);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
  for (long i = 0; i < points; ++i) {
    const auto pt = static_cast<std::size_t>(i);
    field.matrices[pt] = harper_matrix(p, q, field.k1(pt), field.k2(pt));
  }
  return field;
}

BandSystem band_functions(const OperatorField& field, double gap_tol) {
  detail::check_field(field);
  const auto qq = static_cast<std::size_t>(field.q);
  const auto points = static_cast<long>(field.point_count());
  BandSystem bands{field.q, field.grid_size, std::vector<double>(field.point_count() * qq), 0.0,
                   {}, gap_tol};
  std::vector<std::exception_ptr> errors(field.point_count());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
  for (long i = 0; i < points; ++i) {
    const auto pt = static_cast<std::size_t>(i);
    try {
      detail::fiber_bands(field.matrices[pt], bands.values.data() + pt * qq);
    } catch (...) {
      errors[pt] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> jumps(field.point_count());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
  for (long i = 0; i < points; ++i) {
    const auto pt = static_cast<std::size_t>(i);
    jumps[pt] = detail::band_jump(bands.values, field.q, field.grid_size, pt);
  }
  for (double j : jumps) bands.modulus = std::max(bands.modulus, j);
  bands.degeneracies = detail::find_degeneracies(bands.values, field.q, gap_tol);
  return bands;
}

SelectionReport selection_report(const OperatorField& field, const BandSystem& bands) {
  detail::check_field(field);
  if (bands.q != field.q || bands.grid_size != field.grid_size)
    throw Error(ErrorKind::ShapeMismatch, "bands do not belong to this field");
  const auto points = static_cast<long>(field.point_count());
  std::vector<detail::EdgeStats> edges(field.point_count());
  std::vector<std::exception_ptr> errors(field.point_count());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
  for (long i = 0; i < points; ++i) {
    const auto pt = static_cast<std::size_t>(i);
    try {
      edges[pt] = detail::edge_stats(field, bands.values, pt);
    } catch (...) {
      errors[pt] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return detail::assemble_report(field, bands, edges);
}

std::vector<ButterflyRow> butterfly(int qmax, int grid_size) {
  const auto fluxes = detail::reduced_fluxes(qmax);
  std::vector<std::vector<double>> spectra(fluxes.size());
  // One flux per task; the per-flux kernels run single-threaded inside.
  parallel_for(fluxes.size(), [&](std::size_t f) {
    const auto [p, q] = fluxes[f];
    spectra[f] = detail::distinct_sorted(
        serial::band_functions(serial::harper_field(p, q, grid_size)).values);
  });
  std::vector<ButterflyRow> rows;
  for (std::size_t f = 0; f < fluxes.size(); ++f)
    for (double v : spectra[f]) rows.push_back({fluxes[f].first, fluxes[f].second, v});
  return rows;
}

}  // namespace modspec
