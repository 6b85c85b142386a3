#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace levy {

// Worker count used by path-level loops. 0 means "decide automatically":
// the LEVY_PASSAGE_THREADS environment variable if set, otherwise the
// hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Static partition of [0, n) into contiguous chunks, one worker per chunk.
// Each index must be processed independently; results that need reducing
// should be written to a caller-owned slot per index so the reduction can
// run in index order afterwards (output is then independent of the number
// of workers).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& run_range);

}  // namespace levy
