#pragma once

#include <cstddef>
#include <functional>

namespace healthgap {

/// Worker count for data-parallel loops: hardware concurrency, capped by
/// the HEALTHGAP_THREADS environment variable when set to a positive
/// integer. Always at least 1.
unsigned worker_count();

/// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Every element is computed by exactly one worker, so results
/// must not depend on chunk boundaries. Runs inline when a single worker
/// suffices.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace healthgap
