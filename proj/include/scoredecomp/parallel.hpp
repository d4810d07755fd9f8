#pragma once

#include <cstddef>
#include <functional>

namespace scoredecomp {

/// Thread budget: SCOREDECOMP_THREADS when set (floored at 1), otherwise
/// hardware concurrency capped at 8.
int thread_budget();

/// Runs fn(i) for i in [0, count) across the thread budget. Cells must be
/// independent; results land in preallocated slots so scheduling cannot
/// change the output.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace scoredecomp
