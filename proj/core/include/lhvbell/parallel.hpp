#pragma once

#include <cstddef>
#include <functional>

namespace lhvbell {

/// Name of the environment variable that overrides the default worker count.
inline constexpr const char* kWorkersEnvVar = "LHVBELL_WORKERS";

/// LHVBELL_WORKERS if set to a positive integer, else hardware concurrency
/// (at least 1).
std::size_t default_worker_count() noexcept;

/// Runs task(i) for i in [0, tasks) on up to `workers` threads. Tasks must
/// write only to their own slot. The first exception thrown by any task is
/// rethrown after all threads join. workers == 0 means default_worker_count().
void parallel_for(std::size_t tasks, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace lhvbell
