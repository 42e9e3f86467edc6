#pragma once

#include <vector>

#include "modspec/linalg.hpp"

namespace modspec {

/// Hermitian q x q matrices sampled on the uniform N x N lattice of the torus,
/// point (i1, i2) at k = (2 pi i1 / N, 2 pi i2 / N), stored row-major (i1 outer).
struct OperatorField {
  int q;
  int grid_size;
  std::vector<Matrix> matrices;

  std::size_t point_count() const { return matrices.size(); }
  double k1(std::size_t point) const;
  double k2(std::size_t point) const;
};

struct Degeneracy {
  std::size_t point;
  int band;  // gap between band and band + 1 is below gap_tol
  double gap;
};

/// Pointwise descending eigenvalues; values[point * q + band].
struct BandSystem {
  int q;
  int grid_size;
  std::vector<double> values;
  /// Largest jump of any band across a lattice edge (periodic wrap included).
  double modulus;
  std::vector<Degeneracy> degeneracies;
  double gap_tol;

  double value(std::size_t point, int band) const {
    return values[point * static_cast<std::size_t>(q) + static_cast<std::size_t>(band)];
  }
};

struct SelectionReport {
  double grid_spacing;
  /// max edge ||H(k) - H(k')|| / h.
  double lipschitz;
  double modulus;
  double certificate_bound;  // L * h + 1e-9
  bool continuity_ok;
  /// max over edges and bands of |lambda_i(k) - lambda_i(k')| - ||H(k) - H(k')||.
  double weyl_slack;
  std::vector<Degeneracy> degeneracies;
  double spectrum_min;
  double spectrum_max;
  double min_max_defect;   // |min + max|
  double symmetry_defect;  // Hausdorff distance between the value set and its negation
  std::size_t value_count;
};

/// Landau-gauge Harper matrix at one torus point.
Matrix harper_matrix(int p, int q, double k1, double k2);

OperatorField harper_field(int p, int q, int grid_size);
BandSystem band_functions(const OperatorField& field, double gap_tol = 1e-6);
SelectionReport selection_report(const OperatorField& field, const BandSystem& bands);

/// Constant field H(k) = m on an N x N grid.
OperatorField constant_field(const Matrix& m, int grid_size);

struct ButterflyRow {
  int p;
  int q;
  double value;
};

/// Union spectrum (sorted, distinct grid values) for every reduced p/q with q <= qmax.
std::vector<ButterflyRow> butterfly(int qmax, int grid_size);

/// Single-threaded reference kernels; bit-identical to the OpenMP versions.
namespace serial {
OperatorField harper_field(int p, int q, int grid_size);
BandSystem band_functions(const OperatorField& field, double gap_tol = 1e-6);
SelectionReport selection_report(const OperatorField& field, const BandSystem& bands);
std::vector<ButterflyRow> butterfly(int qmax, int grid_size);
}  // namespace serial

}  // namespace modspec
