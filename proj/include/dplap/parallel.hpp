#pragma once

#include <cstddef>
#include <functional>

namespace dplap {

/// Worker count: DPLAP_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency().
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; the first exception thrown is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dplap
