#include "planact/common/random.hpp"

#include <cmath>

namespace planact {

double radical_inverse(std::uint64_t index, unsigned base) noexcept {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

double halton(std::uint64_t index, unsigned base, std::uint64_t seed) noexcept {
  if (seed == 0) return radical_inverse(index, base);
  const double shift = static_cast<double>(splitmix64(seed ^ base) >> 11) * 0x1.0p-53;
  const double v = radical_inverse(index, base) + shift;
  return v - std::floor(v);
}

}  // namespace planact
