#pragma once

#include <cstddef>
#include <functional>

namespace fisher {

// Worker count: hardware concurrency capped by KASTELEYN_THREADS.
unsigned thread_count();

// Calls f(i) for i in [0, n) on up to thread_count() threads. The first
// exception thrown by any f is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace fisher
