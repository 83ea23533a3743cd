#pragma once

#include <cstddef>
#include <functional>

namespace conelab {

/// Worker count: CONELAB_THREADS when set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` threads. Iterations must be
/// independent. If any throw, the exception of the lowest failing index is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = thread_count());

}  // namespace conelab
