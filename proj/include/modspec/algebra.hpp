#pragma once

#include <string>
#include <vector>

#include "modspec/linalg.hpp"
#include "modspec/random.hpp"

namespace modspec {

/// A finite von Neumann algebra M_{k_1} + ... + M_{k_m} carrying the faithful
/// tracial state tau = sum_j w_j * tr_j / k_j. The center is the m-point space.
class AlgebraShape {
 public:
  /// Weights default to 1/m and are renormalized to sum to one.
  explicit AlgebraShape(std::vector<int> dims, std::vector<double> weights = {});

  int factor_count() const { return static_cast<int>(dims_.size()); }
  int dim(int j) const { return dims_[static_cast<std::size_t>(j)]; }
  double weight(int j) const { return weights_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<double>& weights() const { return weights_; }

  bool operator==(const AlgebraShape& other) const;
  bool operator!=(const AlgebraShape& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::vector<double> weights_;
};

AlgebraShape make_algebra(std::vector<int> dims, std::vector<double> weights = {});

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where);

/// Element of A stored blockwise; block j is k_j x k_j.
struct AlgebraElement {
  AlgebraShape shape;
  std::vector<Matrix> blocks;

  AlgebraElement(AlgebraShape s, std::vector<Matrix> b);

  static AlgebraElement identity(const AlgebraShape& s);
  static AlgebraElement zero(const AlgebraShape& s);
  /// Same scalar c on every block.
  static AlgebraElement scalar(const AlgebraShape& s, Complex c);

  AlgebraElement adjoint() const;
  AlgebraElement scaled(Complex c) const;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

enum class ArithmeticOp { Add, Mul, Adjoint, Scale };

/// Dispatching form of the blockwise arithmetic; `b` is ignored for Adjoint and
/// `factor` is used only by Scale.
AlgebraElement element_arithmetic(const AlgebraElement& a, const AlgebraElement& b,
                                  ArithmeticOp op, Complex factor = 1.0);

/// Values of a center element on the m points of the center spectrum.
struct CenterElement {
  std::vector<Complex> values;
};

double operator_norm(const AlgebraElement& a);
double hermitian_defect(const AlgebraElement& a);
CenterElement center_trace(const AlgebraElement& a);
Complex scalar_trace(const AlgebraElement& a);

/// Per-block rank of a projection (count of eigenvalues above 1/2).
std::vector<int> projection_ranks(const AlgebraElement& p);

struct SpectralAtom {
  double value;
  AlgebraElement projection;
};

/// Finite-spectrum Hermitian element sum_i value_i * projection_i, values strictly
/// increasing, projections mutually orthogonal and summing to one.
struct SpectralForm {
  AlgebraShape shape;
  std::vector<SpectralAtom> atoms;

  AlgebraElement reconstruct() const;
};

/// Eigenvalues closer than `cluster_tol` share an atom whose value is the cluster
/// mean. Clusters are formed over all blocks at once.
SpectralForm spectral_decomposition(const AlgebraElement& a, double cluster_tol = 1e-9);

/// Eigen-data of a spectral form restricted to one factor: an orthonormal basis
/// of C^{k_j} and the exact atom value carried by each column, descending.
struct BlockSpectrum {
  Matrix basis;
  std::vector<double> values;
};

BlockSpectrum block_spectrum(const SpectralForm& form, int block);

/// Inverse of block_spectrum: groups exactly equal values across all blocks.
SpectralForm spectral_form_from_blocks(const AlgebraShape& shape,
                                       const std::vector<BlockSpectrum>& blocks);

/// Sorted (descending) multiset of atom values in one block, each repeated by the
/// rank of its projection there.
std::vector<double> block_multiset(const SpectralForm& form, int block);

enum class ElementKind { Projection, Positive, Unitary };

struct ValidationReport {
  bool ok;
  double defect;  // the violated quantity, or the largest checked one when ok
  std::string detail;
};

ValidationReport validate_element(const AlgebraElement& a, ElementKind kind, double tol);

/// Equivalent subprojections: r_p <= p, r_q <= q, v*v = r_p, vv* = r_q and in each
/// block rank r_p = rank r_q = min(rank p, rank q).
struct Subprojections {
  AlgebraElement r_p;
  AlgebraElement r_q;
  AlgebraElement v;
};

Subprojections equivalent_subprojections(const AlgebraElement& p, const AlgebraElement& q);

// Seeded instance generators (see README for the stream layout).
AlgebraElement random_element(SplitMix64& rng, const AlgebraShape& shape);
AlgebraElement random_hermitian_element(SplitMix64& rng, const AlgebraShape& shape);
AlgebraElement random_unitary_element(SplitMix64& rng, const AlgebraShape& shape);
/// Projection whose block-j rank is uniform on [0, k_j].
AlgebraElement random_projection(SplitMix64& rng, const AlgebraShape& shape);

}  // namespace modspec
