#pragma once

#include <cstddef>
#include <functional>

namespace sla {

/// Worker cap for element loops. 0 selects std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Reads SLA_THREADS from the environment, if set.
void configure_threads_from_env();

/// Calls fn(i) for i in [0, n), split into contiguous chunks across workers.
/// fn must only write to per-index storage.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sla
