#pragma once

#include <cstdint>

#include "modspec/linalg.hpp"

namespace modspec {

/// SplitMix64 stream. State advances by the golden-ratio increment and each
/// output is the standard xor-shift-multiply finalizer of the new state, so a
/// seed fully determines every instance built from it on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; consumes two uniforms per call.
  double normal();

  /// Complex normal with E|z|^2 = 1.
  Complex complex_normal();

  /// Derive an independent stream, e.g. one per test instance.
  SplitMix64 fork() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

/// Matrix with iid complex_normal entries.
Matrix gaussian_matrix(SplitMix64& rng, Index rows, Index cols);

/// (G + G*)/2 for Gaussian G.
Matrix random_hermitian_matrix(SplitMix64& rng, Index dim);

/// Q factor of a Gaussian matrix with phases fixed by diag(R) (Haar distributed).
Matrix random_unitary_matrix(SplitMix64& rng, Index dim);

}  // namespace modspec
