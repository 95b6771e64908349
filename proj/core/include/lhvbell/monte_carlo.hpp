#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lhvbell/compensated_sum.hpp"
#include "lhvbell/errors.hpp"
#include "lhvbell/gaussian_core.hpp"
#include "lhvbell/parallel.hpp"

namespace lhvbell {

/// Half-open range of sample indices handled by one chunk.
struct ChunkRange {
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

/// Splits [0, n) into `chunks` contiguous ranges whose sizes differ by at most
/// one; the first n % chunks ranges get the extra sample.
inline ChunkRange chunk_range(std::uint64_t n, std::size_t chunks, std::size_t k) noexcept {
  const std::uint64_t base = n / chunks;
  const std::uint64_t extra = n % chunks;
  const std::uint64_t first = base * k + (k < extra ? k : extra);
  return {first, base + (k < extra ? 1 : 0)};
}

/// Throws InvalidArgument unless 1 <= chunks <= n.
inline void require_chunking(std::uint64_t n, std::size_t chunks) {
  if (chunks == 0) throw InvalidArgument("chunk count must be >= 1");
  if (n < chunks) throw InvalidArgument("need at least one sample per chunk");
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Monte Carlo mean of f(sample) over samples 0..n-1 of `stream`, with the
/// i.i.d. standard error sqrt(var / n). Chunks are summed in parallel and
/// merged in chunk order, so the result does not depend on `workers`.
template <class F>
MeanEstimate estimate_mean(const CovarianceModel& model, const RandomStream& stream,
                           std::uint64_t n, std::size_t chunks, std::size_t workers, F&& f) {
  require_chunking(n, chunks);
  struct Partial {
    CompensatedSum sum;
    CompensatedSum sum_sq;
  };
  std::vector<Partial> partials(chunks);
  const GaussianSampler sampler(model);
  parallel_for(chunks, workers, [&](std::size_t k) {
    const ChunkRange range = chunk_range(n, chunks, k);
    Partial& p = partials[k];
    for (std::uint64_t i = range.first; i < range.first + range.count; ++i) {
      const double v = f(sampler(stream, i));
      p.sum.add(v);
      p.sum_sq.add(v * v);
    }
  });
  CompensatedSum sum, sum_sq;
  for (const Partial& p : partials) {
    sum.merge(p.sum);
    sum_sq.merge(p.sum_sq);
  }
  const double count = static_cast<double>(n);
  const double mean = sum.value() / count;
  double variance = 0.0;
  if (n > 1) variance = std::max(0.0, (sum_sq.value() - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(variance / count), n};
}

}  // namespace lhvbell
