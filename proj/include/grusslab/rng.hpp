#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "grusslab/types.hpp"

namespace grusslab {

/// SplitMix64 generator. Chosen for its published closed-form recurrence, so
/// streams are bit-reproducible across implementations and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1).
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform double in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard complex Gaussian: density exp(-|z|^2)/pi, E|z|^2 = 1.
  Complex complex_gaussian() {
    const double r = std::sqrt(-std::log(uniform01()));
    const double theta = 2.0 * std::numbers::pi_v<double> * uniform01();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  /// Standard real Gaussian via Box-Muller.
  double gaussian() {
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    return r * std::cos(2.0 * std::numbers::pi_v<double> * uniform01());
  }

 private:
  std::uint64_t state_;
};

/// Per-trial seed derivation for sweeps. XOR-then-scramble keeps trial
/// results independent of worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return SplitMix64(master ^ index).next();
}

inline ComplexMatrix random_complex_matrix(SplitMix64& rng, Index rows, Index cols) {
  ComplexMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  return g;
}

inline ComplexMatrix random_hermitian(SplitMix64& rng, Index dim) {
  ComplexMatrix g = random_complex_matrix(rng, dim, dim);
  return 0.5 * (g + g.adjoint()).eval();
}

inline ComplexMatrix random_psd(SplitMix64& rng, Index dim) {
  ComplexMatrix g = random_complex_matrix(rng, dim, dim);
  return (g.adjoint() * g).eval();
}

}  // namespace grusslab
