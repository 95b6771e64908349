#pragma once

#include <array>
#include <cstdint>

namespace lhvbell {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure function of (counter, key); output is identical on
/// every platform.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// SplitMix64 finalizer, used to derive child substreams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Maps 64 random bits to a double in (0, 1] with 53-bit resolution.
inline double uniform_open_closed(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Maps 64 random bits to a double in [0, 1) with 53-bit resolution.
inline double uniform_closed_open(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Addressable random stream. Block `b` of stream (seed, substream) is
/// philox4x32_10(counter = {b_lo, b_hi, sub_lo, sub_hi}, key = {seed_lo,
/// seed_hi}). There is no hidden state: any block can be read in any order,
/// which is what makes chunked parallel runs reproducible.
///
/// Gaussian variates come from Box-Muller on the two 64-bit words of one
/// block: u1 in (0,1] from word 0, u2 in [0,1) from word 1,
/// (z0, z1) = sqrt(-2 ln u1) * (cos 2 pi u2, sin 2 pi u2).
struct RandomStream {
  std::uint64_t master_seed = 0;
  std::uint64_t substream_index = 0;

  /// Independent stream for sub-task `index` (angle pair, sweep row, ...).
  [[nodiscard]] RandomStream child(std::uint64_t index) const noexcept;

  [[nodiscard]] PhiloxCounter block(std::uint64_t block_index) const noexcept;

  /// The two 64-bit words of a block.
  [[nodiscard]] std::array<std::uint64_t, 2> words(std::uint64_t block_index) const noexcept;

  [[nodiscard]] std::array<double, 2> gaussian_pair(std::uint64_t block_index) const noexcept;

  friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

}  // namespace lhvbell
