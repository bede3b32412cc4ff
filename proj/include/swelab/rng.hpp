#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace swelab {

using SeedLabel = std::variant<std::int64_t, std::string>;

// BLAKE2b over (root, labels) truncated to 64 bits. Labels are encoded with a
// type tag and explicit little-endian lengths, so the result does not depend
// on the host.
std::uint64_t seed_derive(std::uint64_t root, const std::vector<SeedLabel>& labels);

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Cheap keyed mixing for per-mode substreams below an already hashed key.
constexpr std::uint64_t mix_key(std::uint64_t key, std::int64_t a, std::int64_t b) {
  const std::uint64_t packed = (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
  return splitmix64(key ^ splitmix64(packed ^ 0xD1B54A32D192ED03ULL));
}

// Counter-based draws: value i of stream key is a pure function of (key, i).
struct CounterStream {
  std::uint64_t key = 0;

  constexpr std::uint64_t bits(std::uint64_t i) const { return splitmix64(key + i * kGolden); }
  // Uniform on (0, 1].
  double uniform(std::uint64_t i) const { return (double(bits(i) >> 11) + 1.0) * 0x1.0p-53; }
  // Two independent standard normals for index j (Marsaglia polar method on
  // counters 8j..8j+7, Box-Muller on the last pair if all three tries reject).
  std::pair<double, double> normal_pair(std::uint64_t j) const {
    const std::uint64_t c = 8 * j;
    for (std::uint64_t a = 0; a < 3; ++a) {
      const double x = 2.0 * uniform(c + 2 * a) - 1.0;
      const double y = 2.0 * uniform(c + 2 * a + 1) - 1.0;
      const double s = x * x + y * y;
      if (s < 1.0 && s > 0.0) {
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        return {x * f, y * f};
      }
    }
    const double r = std::sqrt(-2.0 * std::log(uniform(c + 6)));
    const double th = 2.0 * std::numbers::pi * uniform(c + 7);
    return {r * std::cos(th), r * std::sin(th)};
  }
};

}  // namespace swelab
