#pragma once

#include <cstddef>
#include <functional>

namespace rlab {

// Resolves the worker count: explicit request > RESTRICTION_LAB_WORKERS
// env var > hardware concurrency.  Always >= 1.
int resolve_workers(int requested = 0);

// Static block partition of [0, n) over `workers` threads.
// f(begin, end) must write only to disjoint output slots; results are then
// independent of the worker count (each index's work is self-contained and
// any per-index reduction happens sequentially inside f).
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& f);

}  // namespace rlab
