#pragma once

#include <cstddef>
#include <functional>

namespace fracstab {

/// Worker count: FRACSTAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for every i in [0, n) on up to worker_count() threads.
/// fn must not throw; results are expected to be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracstab
