#pragma once

#include <cstddef>
#include <functional>

namespace hsnet {

//! Worker count: HSNET_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

//! Runs body(i) for i in [0, n) over thread_count() workers in contiguous
//! chunks. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hsnet
