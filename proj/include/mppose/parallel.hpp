#pragma once

#include <cstdint>
#include <functional>

namespace mppose {

// Worker count: MPPOSE_THREADS if set and >= 1, else hardware concurrency.
// Read per call so tests can adjust the environment in-process.
int worker_count();

// Runs fn(i) for i in [0, n).  Work is chunked dynamically; fn must only
// write to per-index state.  The first exception thrown by fn is rethrown
// after all workers finish.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace mppose
