#include "fracstab/random.hpp"

#include <algorithm>
#include <cmath>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
}

double GaussianSampler::next() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  // 53-bit uniforms; u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  hasSpare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

SphereField random_field(int N, int Lmax, const std::vector<int>& degrees,
                         std::uint64_t seed) {
  std::vector<int> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!sorted.empty() && (sorted.front() < 0 || sorted.back() > Lmax)) {
    throw ValidationError("random_field: degrees must lie in [0, Lmax]");
  }
  SphereField field(N, Lmax);
  GaussianSampler sampler(seed);
  for (const int l : sorted) {
    auto block = field.degreeBlock(l);
    for (Eigen::Index j = 0; j < block.size(); ++j) block[j] = sampler.next();
  }
  return field;
}

}  // namespace fracstab
