#pragma once

#include <cstddef>
#include <functional>

namespace wishart {

/// Worker count: WISHART_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs f(0) .. f(n-1) on up to worker_count() threads. Work is split into
/// contiguous blocks; callers write results by index so reductions done
/// afterwards are order-independent of scheduling. The exception thrown for
/// the smallest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace wishart
