#pragma once

#include <vector>

#include "modspec/diagonalize.hpp"

namespace modspec {

/// Result of exchanging spectral mass between two finite-spectrum eigenvalues.
/// `witness` is a unitary on L_2(A) with W* diag(a, b) W = diag(a', b').
struct OrderedPair {
  SpectralForm first;
  SpectralForm second;
  ModuleOperator witness;
};

/// Per block, the larger half of the union spectrum (with multiplicity) goes to
/// the first slot and the smaller half to the second. Values are permuted, never
/// recomputed, so the union multiset is preserved exactly. An already ordered pair
/// is returned unchanged with the identity witness.
OrderedPair order_pair(const SpectralForm& a, const SpectralForm& b);

struct OrderedFamily {
  std::vector<SpectralForm> lambdas;
  /// Unitary on L_n(A) with W* diag(lambdas_in) W = diag(lambdas_out).
  ModuleOperator witness;
  int exchanges = 0;
};

/// Adjacent order_pair passes until every consecutive margin is nonnegative.
OrderedFamily order_all(const std::vector<SpectralForm>& lams);

/// u with ||u* lam u - target|| <= max sorted-eigenvalue gap (eigenbases aligned
/// in descending order). Returns the identity when lam == target.
AlgebraElement conjugating_unitary(const AlgebraElement& lam, const AlgebraElement& target);

struct IterationStep {
  double eps;
  ModuleOperator k_n;
  std::vector<AlgebraElement> lambda_bars;
  /// max_i ||lambda_bar_i^(n) - lambda_bar_i^(n-1)||; zero at the first step.
  double step_distance;
  /// ||K_n - K||.
  double approximation_error;
  /// max_i ||K xbar_i - xbar_i lambda_bar_i^(n)|| with xbar_i = x_i c_{i,n}.
  double residual;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  std::vector<AlgebraElement> limits;
  /// K's eigenvectors rotated by the accumulated conjugation chain.
  std::vector<ModuleVector> eigenvectors;
  double final_residual = 0.0;
};

/// Approximate K by the finite-spectrum K_n on the 2^-n grid, order the
/// eigenvalues of each K_n and chain-conjugate them onto their predecessors.
/// Requires K strictly positive and 1 <= iterations <= 40.
IterationTrace iterate_weak_diagonalization(const ModuleOperator& k, int iterations);

/// Global sort-then-chunk of the union spectrum per block (the reference ordering).
std::vector<std::vector<std::vector<double>>> sorted_chunks(const std::vector<SpectralForm>& lams);

/// Finite-spectrum eigenvalue family of a given shape: each lambda_i gets
/// `levels` distinct random values (shared across blocks) in random eigenbases.
std::vector<SpectralForm> random_spectral_family(SplitMix64& rng, const AlgebraShape& shape,
                                                 int count, int levels);

}  // namespace modspec
