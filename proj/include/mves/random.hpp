#pragma once

#include "mves/linalg.hpp"

#include <cstdint>
#include <random>

namespace mves {

/// Seedable generator whose output is identical on every platform.
///
/// Bits come from std::mt19937_64, whose sequence is fixed by the standard.
/// The standard distributions are not (their algorithms are
/// implementation-defined), so every variate below is derived from raw bits
/// with a documented method:
///   uniform   53 high bits / 2^53
///   normal    Marsaglia polar method
///   gamma     Marsaglia-Tsang squeeze; shape < 1 via the U^{1/shape} boost
///   dirichlet normalized independent Gamma(mu_i, 1) draws
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  double gamma(double shape);
  Vector dirichlet(const Vector& concentration);
  /// Uniform direction on the unit sphere in R^dim.
  Vector unit_direction(Eigen::Index dim);
  /// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
  Matrix orthogonal(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for stream `(a, b)` under a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace mves
