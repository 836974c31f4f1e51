#pragma once

#include <cstddef>
#include <functional>

namespace dilab {

/// Worker count: DILAB_THREADS if set and positive, else the hardware concurrency.
int thread_budget();

/// Runs fn(0..count-1) on up to thread_budget() threads. Results must be written by index, so
/// the outcome does not depend on scheduling. The first exception is rethrown after all jobs stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace dilab
