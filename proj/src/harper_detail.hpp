#pragma once

// Per-point pieces shared by the OpenMP kernels and their serial references.

#include <vector>

#include "modspec/harper.hpp"

namespace modspec::detail {

void check_flux(int p, int q, int grid_size);
void check_field(const OperatorField& field);

/// Descending eigenvalues of one fiber written to out[0..q).
void fiber_bands(const Matrix& h, double* out);

struct EdgeStats {
  double band_jump = 0.0;   // max band change over the two forward edges
  double field_jump = 0.0;  // max ||H(k) - H(k')|| over the same edges
  double weyl_slack = -1.0;
};

/// Forward neighbours (i1 + 1, i2) and (i1, i2 + 1), periodic.
EdgeStats edge_stats(const OperatorField& field, const std::vector<double>& values,
                     std::size_t point);
double band_jump(const std::vector<double>& values, int q, int grid_size, std::size_t point);

std::vector<Degeneracy> find_degeneracies(const std::vector<double>& values, int q,
                                          double gap_tol);
SelectionReport assemble_report(const OperatorField& field, const BandSystem& bands,
                                const std::vector<EdgeStats>& edges);
std::vector<std::pair<int, int>> reduced_fluxes(int qmax);
std::vector<double> distinct_sorted(std::vector<double> values);

}  // namespace modspec::detail
