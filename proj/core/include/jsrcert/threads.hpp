#pragma once

#include <cstdint>
#include <functional>

namespace jsrcert {

// Worker count used by parallel loops: hardware concurrency, capped by the
// JSRCERT_THREADS environment variable when set to a positive integer.
int thread_count();

// Splits [0, total) into contiguous chunks and runs body(begin, end, chunk)
// on a small thread pool. Chunk boundaries depend only on `total` and the
// worker count; callers must keep per-chunk work independent. Runs inline
// when a single worker suffices.
void parallel_chunks(std::int64_t total,
                     const std::function<void(std::int64_t, std::int64_t, int)>& body);

}  // namespace jsrcert
