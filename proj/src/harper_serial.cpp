#include <algorithm>

#include "harper_detail.hpp"
#include "modspec/error.hpp"

namespace modspec::serial {

OperatorField harper_field(int p, int q, int grid_size) {
  detail::check_flux(p, q, grid_size);
  const auto n = static_cast<std::size_t>(grid_size);
  OperatorField field{q, grid_size, {}};
  field.matrices.reserve(n * n);
  for (std::size_t pt = 0; pt < n * n; ++pt)
    field.matrices.push_back(harper_matrix(p, q, field.k1(pt), field.k2(pt)));
  return field;
}

BandSystem band_functions(const OperatorField& field, double gap_tol) {
  detail::check_field(field);
  const auto qq = static_cast<std::size_t>(field.q);
  BandSystem bands{field.q, field.grid_size, std::vector<double>(field.point_count() * qq), 0.0,
                   {}, gap_tol};
  for (std::size_t pt = 0; pt < field.point_count(); ++pt)
    detail::fiber_bands(field.matrices[pt], bands.values.data() + pt * qq);
  for (std::size_t pt = 0; pt < field.point_count(); ++pt)
    bands.modulus = std::max(bands.modulus,
                             detail::band_jump(bands.values, field.q, field.grid_size, pt));
  bands.degeneracies = detail::find_degeneracies(bands.values, field.q, gap_tol);
  return bands;
}

SelectionReport selection_report(const OperatorField& field, const BandSystem& bands) {
  detail::check_field(field);
  if (bands.q != field.q || bands.grid_size != field.grid_size)
    throw Error(ErrorKind::ShapeMismatch, "bands do not belong to this field");
  std::vector<detail::EdgeStats> edges;
  edges.reserve(field.point_count());
  for (std::size_t pt = 0; pt < field.point_count(); ++pt)
    edges.push_back(detail::edge_stats(field, bands.values, pt));
  return detail::assemble_report(field, bands, edges);
}

std::vector<ButterflyRow> butterfly(int qmax, int grid_size) {
  std::vector<ButterflyRow> rows;
  for (const auto& [p, q] : detail::reduced_fluxes(qmax))
    for (double v : detail::distinct_sorted(serial::band_functions(serial::harper_field(p, q, grid_size)).values))
      rows.push_back({p, q, v});
  return rows;
}

}  // namespace modspec::serial
