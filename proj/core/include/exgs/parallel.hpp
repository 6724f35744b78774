#pragma once

#include <cstddef>
#include <functional>

namespace exgs {

// Worker count from the EXGS_THREADS environment variable, else the hardware
// concurrency. Never less than 1.
unsigned default_worker_count();

// Resolves a requested count; 0 means default_worker_count().
unsigned resolve_workers(unsigned requested);

// Runs body(i) for every i in [0, n). Items are handed out dynamically, so body must
// only write to state owned by item i for the result to be schedule-independent.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace exgs
