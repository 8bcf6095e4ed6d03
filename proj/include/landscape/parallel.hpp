#ifndef LANDSCAPE_PARALLEL_HPP
#define LANDSCAPE_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace landscape {

/// Worker cap: LANDSCAPE_LAB_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
unsigned thread_budget();

/// Runs fn(0..n-1), partitioned across the thread budget. Tasks must be
/// independent; results land wherever fn writes them, so callers keep a
/// deterministic order by indexing into preallocated storage.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace landscape

#endif
