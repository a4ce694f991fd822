#pragma once

#include <cstddef>
#include <functional>

namespace amrf {

/// Number of worker threads for jobs <= 0 (machine parallelism).
int resolve_jobs(int jobs);

/// Run fn(i) for i in [0, n). With jobs > 1 the indices are distributed over
/// worker threads; results must be written to per-index slots so the outcome
/// is independent of scheduling. If callbacks throw, the exception from the
/// smallest index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace amrf
