#pragma once

#include <vector>

#include "modspec/algebra.hpp"

namespace modspec {

/// Element of L_n(A). Block j stacks the n algebra components vertically and is
/// (n k_j) x k_j.
struct ModuleVector {
  AlgebraShape shape;
  int n;
  std::vector<Matrix> blocks;

  ModuleVector(AlgebraShape s, int n, std::vector<Matrix> b);

  /// Standard basis element e_k, 0-based.
  static ModuleVector basis(const AlgebraShape& s, int n, int k);
  static ModuleVector zero(const AlgebraShape& s, int n);

  /// Right action x * a.
  ModuleVector times(const AlgebraElement& a) const;
  /// Component k as an element of A.
  AlgebraElement component(int k) const;
};

ModuleVector operator+(const ModuleVector& x, const ModuleVector& y);
ModuleVector operator-(const ModuleVector& x, const ModuleVector& y);

/// Adjointable A-linear map on L_n(A); block j is (n k_j) x (n k_j).
struct ModuleOperator {
  AlgebraShape shape;
  int n;
  std::vector<Matrix> blocks;

  ModuleOperator(AlgebraShape s, int n, std::vector<Matrix> b);

  static ModuleOperator identity(const AlgebraShape& s, int n);
  static ModuleOperator zero(const AlgebraShape& s, int n);
  /// diag(a_1, ..., a_n) in the standard basis.
  static ModuleOperator diagonal(const std::vector<AlgebraElement>& entries);

  ModuleOperator adjoint() const;
  ModuleOperator scaled(Complex c) const;
  /// Block dimension n k_j of factor j.
  Index block_dim(int j) const { return static_cast<Index>(n) * shape.dim(j); }
};

ModuleOperator operator+(const ModuleOperator& a, const ModuleOperator& b);
ModuleOperator operator-(const ModuleOperator& a, const ModuleOperator& b);
ModuleOperator operator*(const ModuleOperator& a, const ModuleOperator& b);

void require_same_module(const AlgebraShape& s1, int n1, const AlgebraShape& s2, int n2,
                         const char* where);

/// <x, y> = sum_k x_k^* y_k.
AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y);

/// Module norm ||<x, x>||^{1/2}.
double module_norm(const ModuleVector& x);

/// theta_{x,y}(z) = x <y, z>.
ModuleOperator theta_operator(const ModuleVector& x, const ModuleVector& y);

ModuleVector apply_operator(const ModuleOperator& k, const ModuleVector& x);

/// Extended trace tr (x) tau, normalized so the identity on L_n(A) has trace n.
double tau_bar(const ModuleOperator& k);

double operator_norm(const ModuleOperator& k);
double hermitian_defect(const ModuleOperator& k);

struct PositivityReport {
  bool strictly_positive;
  double min_eigenvalue;
  double hermitian_defect;
};

/// Hermitian within tol and every block eigenvalue > tol.
PositivityReport is_strictly_positive(const ModuleOperator& k, double tol = 1e-10);

/// Deflate each vector against the previous outputs, then normalize by the
/// inverse square root of its Gram element. Throws RankDeficient when a deflated
/// Gram element has an eigenvalue <= 1e-8 in some block.
std::vector<ModuleVector> orthonormalize(const std::vector<ModuleVector>& xs);

/// max_{i,j} ||<x_i, x_j> - delta_ij||.
double orthonormality_defect(const std::vector<ModuleVector>& xs);

/// sum_i theta_{x_i, x_i}.
ModuleOperator span_projection(const AlgebraShape& shape, int n,
                               const std::vector<ModuleVector>& xs);

/// ||(1 - P) K (1 - P)|| for P the projection onto the span of an orthonormal family.
/// Throws NotOrthonormal if the family is off by more than 1e-8.
double tail_norm(const ModuleOperator& k, const std::vector<ModuleVector>& xs);

ModuleVector random_module_vector(SplitMix64& rng, const AlgebraShape& shape, int n);
ModuleOperator random_module_operator(SplitMix64& rng, const AlgebraShape& shape, int n);
ModuleOperator random_hermitian_operator(SplitMix64& rng, const AlgebraShape& shape, int n);
/// G*G + shift for Gaussian G; shift 0.1 is the generator used by `gen`.
ModuleOperator random_positive_operator(SplitMix64& rng, const AlgebraShape& shape, int n,
                                        double shift = 0.1);
ModuleOperator random_module_unitary(SplitMix64& rng, const AlgebraShape& shape, int n);

}  // namespace modspec
