#pragma once
#include <functional>

// Optional chunked parallelism for the row loops of the stencil operators.
// Chunk boundaries depend only on the range and the configured thread count,
// and per-chunk work never writes across chunks, so results for a fixed
// thread count are reproducible.

namespace qflow {

void set_threads(int n);  // clamped to >= 1; default 1 (serial)
int thread_count();

// fn(begin, end) over contiguous chunks of [0, n)
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace qflow
