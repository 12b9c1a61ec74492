#pragma once

#include <cstdint>
#include <string_view>

namespace planact {

/// SplitMix64 step. Used both as a seed mixer and as a tiny PRNG whose output
/// is identical on every platform (unlike std::uniform_real_distribution).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ (splitmix64(b) + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2)));
}

/// FNV-1a over bytes.
constexpr std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

/// Radical inverse of `index` in `base` (Halton / van der Corput).
double radical_inverse(std::uint64_t index, unsigned base) noexcept;

/// Seeded Halton point: the sequence is shifted by a seed-derived
/// Cranley-Patterson rotation so different seeds explore different orders
/// while staying low-discrepancy.
double halton(std::uint64_t index, unsigned base, std::uint64_t seed) noexcept;

}  // namespace planact
