#include "lhvbell/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace lhvbell {
namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53u;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline PhiloxCounter round(const PhiloxCounter& ctr, const PhiloxKey& key) noexcept {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kMultiplier0, ctr[0], lo0, hi0);
  mulhilo(kMultiplier1, ctr[2], lo1, hi1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round(counter, key);
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RandomStream RandomStream::child(std::uint64_t index) const noexcept {
  return {master_seed, splitmix64(splitmix64(substream_index) ^ (index + 1))};
}

PhiloxCounter RandomStream::block(std::uint64_t block_index) const noexcept {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block_index),
                          static_cast<std::uint32_t>(block_index >> 32),
                          static_cast<std::uint32_t>(substream_index),
                          static_cast<std::uint32_t>(substream_index >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32)};
  return philox4x32_10(ctr, key);
}

std::array<std::uint64_t, 2> RandomStream::words(std::uint64_t block_index) const noexcept {
  const PhiloxCounter b = block(block_index);
  return {(static_cast<std::uint64_t>(b[1]) << 32) | b[0],
          (static_cast<std::uint64_t>(b[3]) << 32) | b[2]};
}

std::array<double, 2> RandomStream::gaussian_pair(std::uint64_t block_index) const noexcept {
  const auto w = words(block_index);
  const double u1 = uniform_open_closed(w[0]);
  const double u2 = uniform_closed_open(w[1]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace lhvbell
