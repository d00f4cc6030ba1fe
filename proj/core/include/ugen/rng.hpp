#pragma once

#include <cstdint>
#include <vector>

#include "ugen/complex.hpp"

namespace ugen {

/// Deterministic random source. All randomness in the toolkit flows through
/// this class so that a run is reproducible from its seed alone; the
/// generator and all derived draws are fixed independent of platform and
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller.
  double normal();

  /// Uniform on the complex unit circle.
  Cx unit_complex();

  /// Complex standard Gaussian.
  Cx gauss_complex();

  /// Vector on the complex unit sphere in C^n.
  std::vector<Cx> unit_sphere(int n);

  /// Derive an independent child seed; stable under call order.
  std::uint64_t child_seed(std::uint64_t salt) const;

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ugen
