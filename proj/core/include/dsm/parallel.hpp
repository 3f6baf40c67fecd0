#pragma once

#include <cstddef>
#include <functional>

namespace dsm {

/// Worker count: DSM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 selects
/// worker_count()). Indices are handed out in ascending order; the first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body, int workers = 0);

}  // namespace dsm
