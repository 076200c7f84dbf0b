#ifndef CONSTEL_PARALLEL_HPP
#define CONSTEL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace constel {

// Worker count resolution: explicit value wins, then the CONSTEL_THREADS
// environment variable, then hardware concurrency.
unsigned resolve_workers(unsigned requested);

// Runs fn(chunk) for every chunk index in [0, chunk_count).  Chunks are claimed
// by an atomic counter; callers store per-chunk results in pre-sized slots and
// merge them in index order, so the outcome is independent of worker count.
void parallel_chunks(std::size_t chunk_count, unsigned workers,
                     const std::function<void(std::size_t)>& fn);

}  // namespace constel

#endif
