#pragma once

// Deterministic Gaussian sampling for seeded experiment fields. The stream is
// a fixed Box-Muller transform over std::mt19937_64, so a seed fully
// determines every generated field (byte-stable across runs).

#include <cstdint>
#include <random>
#include <vector>

#include "fracstab/harmonics.hpp"

namespace fracstab {

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  /// One standard normal draw.
  double next();

 private:
  std::mt19937_64 engine_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

/// Band-limited field with independent standard normal coefficients on the
/// selected degrees (filled in ascending degree order), zero elsewhere.
SphereField random_field(int N, int Lmax, const std::vector<int>& degrees,
                         std::uint64_t seed);

}  // namespace fracstab
