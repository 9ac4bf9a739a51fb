#pragma once

#include <cstdint>
#include <functional>

namespace mgraphon {

// Process-wide cap on worker threads (CLI --threads). Defaults to the
// hardware concurrency, at most 8.
int max_threads();
void set_max_threads(int threads);

// Runs body(i) for i in [0, count). Each index must be independent of the
// others; bodies typically write into preallocated slot i, so the result is
// identical for any worker count. threads <= 0 means use max_threads().
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body,
                  int threads = 0);

}  // namespace mgraphon
