#pragma once

#include <cstddef>
#include <functional>

namespace hetenc::nn {

// Worker count: HETEROCHEM_THREADS when set (clamped to [1, 64]), otherwise
// the hardware concurrency.
std::size_t thread_count();

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries depend only on n and chunk_size, so per-chunk results can
// be reduced in chunk order for thread-count-independent determinism.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace hetenc::nn
