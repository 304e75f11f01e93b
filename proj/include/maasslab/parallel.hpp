#pragma once

#include <cstddef>
#include <functional>

namespace maasslab {

/// Worker count from MAASSLAB_WORKERS, else the hardware concurrency.
int worker_count();

/// Calls body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results to per-index slots so the outcome does not depend on
/// scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace maasslab
