#pragma once

#include <functional>

namespace oligodyn {

/** Worker count: OLIGODYN_THREADS if set (clamped to >= 1), else the
    hardware concurrency. */
int thread_count();

/** Workers parallel_for will use for n items: min(thread_count(), n). */
int plan_workers(long long n);

/**
 * Runs body(worker, lo, hi) over a contiguous partition of [0, n); worker
 * indexes the chunk and can address a preallocated per-worker buffer.
 * Chunk boundaries depend only on n and plan_workers(n), and callers write
 * results into disjoint slots, so output is deterministic for any thread
 * count.  The first exception thrown by a chunk is rethrown.
 */
void parallel_for(long long n,
                  const std::function<void(int, long long, long long)>& body);

}  // namespace oligodyn
