#pragma once

#include <cstddef>
#include <functional>

namespace gridflow {

// Worker cap: GRIDFLOW_THREADS when set (clamped to >= 1), otherwise 1.
// Desk-scale systems gain little from threads, so parallelism is opt-in.
int worker_limit();

// Runs fn(begin, end) over a partition of [0, n) on up to worker_limit()
// threads. Ranges are contiguous and disjoint, so writes to disjoint output
// slots stay deterministic regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace gridflow
