#pragma once

#include <cstddef>
#include <functional>

namespace coh2 {

// Worker count: COH2_THREADS if set, else hardware concurrency (capped).
int thread_count();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly in
// parallel.  Chunks are deterministic; fn must not touch shared mutable
// state.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace coh2
