#pragma once

#include <cstddef>
#include <functional>

namespace aklt {

/// Worker count from AKLT_WORKERS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned default_worker_count();

/// Runs task(i) for i in [0, n) on up to `workers` threads. Tasks must not
/// share mutable state. The first exception thrown by a task is rethrown
/// after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task, unsigned workers = 0);

}  // namespace aklt
