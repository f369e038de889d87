#ifndef FRACMEASURE_PARALLEL_HPP
#define FRACMEASURE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fracmeasure {

// Worker cap: defaults to hardware concurrency, overridable by the
// FRACMEASURE_THREADS environment variable or set_thread_count().
int thread_count();
void set_thread_count(int n);

// Runs fn(i) for i in [0, n). Each index must be independent; results written
// by index stay deterministic regardless of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracmeasure

#endif
