#pragma once

#include <cstdint>

namespace netiss {

// Portable index-addressed randomness. Every random value in the library is
//   z   = splitmix64(seed + 0x9E3779B97F4A7C15 * (stream + 1))
//   u   = (z >> 11) * 2^-53          in [0, 1)
// where `stream` is a deterministic function of the draw's position
// (index, component, sample number). No generator state is shared, so draws
// are reproducible across platforms, thread counts and evaluation orders.

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_bits(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

constexpr double unit_uniform(std::uint64_t seed, std::uint64_t stream) {
  return static_cast<double>(stream_bits(seed, stream) >> 11) * 0x1.0p-53;
}

/// Stream id for (a, b) pairs, e.g. (index, component).
constexpr std::uint64_t pair_stream(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a) ^ (b * 0xD1B54A32D192ED03ULL);
}

}  // namespace netiss
