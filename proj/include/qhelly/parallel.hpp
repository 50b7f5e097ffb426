#pragma once

#include <functional>

namespace qh {

/// Worker count from QH_THREADS, else hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 means worker_count()).
/// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qh
