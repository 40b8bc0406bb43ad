#pragma once

#include <cstddef>
#include <functional>

namespace stargraph {

/// Worker count from STARGRAPH_THREADS, else hardware concurrency.
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Callers write results into pre-sized slots so output order never depends
/// on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace stargraph
