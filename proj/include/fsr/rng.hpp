#pragma once

#include <array>
#include <cstdint>

namespace fsr {

__extension__ typedef unsigned __int128 Uint128;

// Philox4x32-10 (Salmon et al., SC'11). Stateless: the output is a pure
// function of (key, counter), so the draw for any (seed, stream, index) can be
// computed independently of every other draw.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(std::uint64_t key, Block counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * counter[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ k0, static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kW0;
      k1 += kW1;
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53U;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57U;
  static constexpr std::uint32_t kW0 = 0x9E3779B9U;
  static constexpr std::uint32_t kW1 = 0xBB67AE85U;
};

/// 64 random bits keyed on (seed, stream, index).
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto out = Philox4x32::generate(
      seed, {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
             static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)});
  return (std::uint64_t{out[0]} << 32) | out[1];
}

/// Uniform in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(counter_bits(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Bern(p) draw; p = 0 never fires and p = 1 always fires.
inline bool counter_bernoulli(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, double p) {
  return counter_uniform(seed, stream, index) < p;
}

/// Uniform integer in [0, n) by 64x64 multiply-high (bias below n / 2^64).
inline std::uint64_t counter_below(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                                   std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<Uint128>(counter_bits(seed, stream, index)) * n) >> 64);
}

/// SplitMix64 finalizer; derives independent child seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace fsr
