#pragma once

#include <vector>

#include "modspec/hilbert_module.hpp"

namespace modspec {

/// Ordered diagonalization K x_i = x_i lambda_i over A.
struct Diagonalization {
  std::vector<ModuleVector> eigenvectors;
  std::vector<AlgebraElement> eigenvalues;
  /// margins[j][i] = min spec(lambda_i, block j) - max spec(lambda_{i+1}, block j).
  std::vector<std::vector<double>> ordering_margins;
  /// max_i ||K x_i - x_i lambda_i||.
  double residual = 0.0;
};

struct DiagonalizeOptions {
  /// Accept positive semidefinite input (kernel present) instead of requiring
  /// strict positivity.
  bool allow_semidefinite = false;
  double positivity_tol = 1e-10;
};

/// Per block: eigendecompose, sort descending, cut into n chunks of k_j
/// eigenvalues. Chunk i gives x_i's block panel and lambda_i = diag(chunk values)
/// in that basis.
Diagonalization diagonalize(const ModuleOperator& k, const DiagonalizeOptions& options = {});

std::vector<std::vector<double>> ordering_margins(const std::vector<AlgebraElement>& lams);

/// sum_i theta_{x_i lambda_i, x_i}.
ModuleOperator reconstruct(const Diagonalization& d);

/// Descending spectrum of lambda in block j.
std::vector<double> block_eigenvalues(const AlgebraElement& lambda, int block);

/// Spectral distribution of a Hermitian module operator under tau-bar: every block
/// eigenvalue is an atom of weight w_j / k_j.
class SpectralScale {
 public:
  struct Atom {
    double weight;
    double value;
  };

  explicit SpectralScale(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_weight() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  /// Cumulative weight through atom i (inclusive).
  double cumulative(std::size_t i) const { return cumulative_[i]; }

  /// inf{ lambda : tau-bar(E(-inf, lambda)) >= alpha } for alpha in (0, total].
  double evaluate(double alpha) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

SpectralScale spectral_scale(const ModuleOperator& k);

/// Brute-force value of inf over projections P with tau-bar(P) >= alpha of the top
/// of the spectrum of K compressed to Im P, enumerating every eigenvector subset.
/// Total dimension must be <= 12 and 2^dim <= subspace_budget.
double minimax_oracle(const ModuleOperator& k, double alpha, long subspace_budget = 1L << 12);

/// The enumeration behind minimax_oracle, kept so many alpha values can be
/// queried against one set of compressions.
class MinimaxProfile {
 public:
  struct Subspace {
    double trace;
    double top;  // sup of the Rayleigh quotient over the subspace
  };

  MinimaxProfile(const ModuleOperator& k, long subspace_budget = 1L << 12);
  double query(double alpha) const;

 private:
  std::vector<Subspace> subspaces_;
  double tol_;
};

/// K' = sum of eps * ceil(v / eps) over K's eigenprojections; the ceiling is never
/// below eps, so K' is strictly positive even when K has a kernel.
struct SnappedOperator {
  ModuleOperator op;
  /// Eigenbasis of K per block (descending), shared by K'.
  std::vector<Matrix> bases;
  /// Snapped values per block, aligned with `bases` columns.
  std::vector<std::vector<double>> values;
};

SnappedOperator finite_spectrum_approx(const ModuleOperator& k, double eps);

/// Refinement of two divisions of unity into pieces R_m^(1), R_m^(2) of equal
/// tau-bar. Every part lives in a single factor of A.
struct PairedPartition {
  struct Parent {
    int spectral;  // index into the spectral projections, descending value order
    int chunk;     // index i of the eigenvector projection Q_i
  };

  AlgebraShape shape;
  int n;
  std::vector<ModuleOperator> parts1, parts2;
  std::vector<double> traces;
  std::vector<Parent> parents1, parents2;
  std::vector<int> part_block;
  /// Orthonormal basis of Im R_m^(r) inside the factor `part_block[m]`.
  std::vector<Matrix> bases1, bases2;
  /// The families being refined.
  std::vector<ModuleOperator> spectral1, spectral2, chunks1, chunks2;
};

/// Spectral projections (descending value) of a Hermitian operator with values
/// clustered at `cluster_tol`.
std::vector<ModuleOperator> spectral_projections(const ModuleOperator& k,
                                                 double cluster_tol = 1e-9);

PairedPartition common_refinement(const ModuleOperator& k1, const ModuleOperator& k2,
                                  double cluster_tol = 1e-9);

/// U with U(Im R_m^(2)) = Im R_m^(1). Identical ranges map by the identity.
ModuleOperator pairing_unitary(const PairedPartition& pp);

struct PartitionDefects {
  double partition_of_unity;  // max_r ||sum_m R_m^(r) - 1||
  double orthogonality;       // max_r max_{m != l} ||R_m R_l||
  double trace_match;         // max_m |tau(R_m^(1)) - tau(R_m^(2))|
  double subordination;       // max ||parent R_m - R_m||
  double total_trace_error;   // max_r |sum_m tau(R_m^(r)) - n|
};

PartitionDefects check_partition(const PairedPartition& pp);

struct MatchReport {
  ModuleOperator unitary;
  std::vector<std::pair<AlgebraElement, AlgebraElement>> pairs;
  double delta;                  // ||K1 - K2||
  double conjugation_defect;     // ||U* K1 U - K2||
  std::vector<double> pair_bounds;  // ||lambda_i^(1) - lambda_i^(2)||
  double max_pair_bound;
  double eigenvector_defect;     // max_i ||theta(U x_i2) - theta(x_i1)||
};

/// Perturbation matching through common_refinement + pairing_unitary.
MatchReport match_eigenvalues(const ModuleOperator& k1, const ModuleOperator& k2);

}  // namespace modspec
