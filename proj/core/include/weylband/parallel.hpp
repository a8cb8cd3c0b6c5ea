#pragma once

#include <cstddef>
#include <functional>

namespace weylband {

// Worker count: WEYLBAND_THREADS if set (>=1), else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) on a small thread pool. Each index writes only
// its own output slot, so results are deterministic regardless of schedule.
// The first exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace weylband
