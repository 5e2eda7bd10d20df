#pragma once

#include <cstdint>
#include <functional>

namespace scatter {

/// Default worker count: SCATTER_THREADS env var, else hardware concurrency.
int resolve_thread_count(int requested = 0);

void set_default_threads(int n);
int default_threads();

/// Runs fn(i) for i in [0, n) on a small thread pool; fn must only write to
/// per-index slots.  Exceptions are captured and rethrown on the caller.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn, int threads = 0);

}  // namespace scatter
