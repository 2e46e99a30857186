#pragma once

#include <cstddef>
#include <functional>

namespace fuchs {

// Worker cap: FUCHS_NUM_THREADS if set to a positive integer, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, count). Each index is visited exactly once; callers write
// results into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fuchs
