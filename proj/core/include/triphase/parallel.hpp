#pragma once

#include <cstddef>
#include <functional>

namespace triphase {

// Upper bound on worker threads used by data-parallel loops. 0 means
// "hardware concurrency". Results never depend on this value: every loop
// body writes disjoint slots and reductions happen afterwards in index order.
void set_thread_cap(int cap);
int thread_count();

// Runs body(i) for i in [0, n), split into contiguous chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace triphase
