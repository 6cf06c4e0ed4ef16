#pragma once

#include <cstdint>
#include <string_view>

namespace openresp {

inline constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 stream. Every random draw in the library goes through this so
// that outputs are reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n > 0.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

 private:
  std::uint64_t state_;
};

// Per-task seed: mixes the run seed with a "module:purpose" label.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) noexcept {
  return SplitMix64(seed ^ fnv1a64(purpose)).next();
}

}  // namespace openresp
