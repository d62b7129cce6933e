#pragma once

#include <cstddef>
#include <functional>

namespace wsheet {

/// Worker count from WSHEET_WORKERS, else hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, n) across worker_count() threads. Each index is
/// visited exactly once; callers write results into per-index slots so output
/// order never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wsheet
