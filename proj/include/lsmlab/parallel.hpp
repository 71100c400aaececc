#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lsmlab {

// Worker count: min(hardware, LSMLAB_THREADS) with a floor of 1.
std::size_t worker_count();

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries depend only on n, never on the thread count, so any
// chunk-indexed reduction done by the caller is deterministic.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Deterministic ordered sum of per-chunk partials.
double ordered_sum(const std::vector<double>& partials);

}  // namespace lsmlab
