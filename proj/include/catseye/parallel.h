/** \file    parallel.h
    \brief   Minimal deterministic work distribution over std::thread
*/
#pragma once
#include <cstddef>
#include <functional>

namespace catseye {

/** Number of worker threads: hardware concurrency, capped by the environment
    variable CATSEYE_THREADS when it holds a positive integer */
int worker_count();

/** Run body(i) for i = 0..n-1 on up to worker_count() threads.
    Each index is processed exactly once; results must be written to
    index-addressed storage, so the outcome does not depend on scheduling.
    The first exception thrown by any body is rethrown in the caller. */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace catseye
