#pragma once

#include <cstddef>
#include <functional>

namespace bathforge {

/// Worker count for sweeps: BATHFORGE_THREADS if set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
unsigned sweep_threads();

/// Calls body(i) for i in [0, n) on up to sweep_threads() threads. The first
/// exception thrown by any call is rethrown on the calling thread after all
/// workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bathforge
