#pragma once

#include <functional>

namespace toposqt {

// Thread budget: min(TOPOSQT_THREADS, hardware concurrency), at least 1.
int thread_budget();

// Runs fn(0..n-1), possibly on worker threads. fn must only write to
// per-index slots; results are therefore independent of the schedule.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace toposqt
