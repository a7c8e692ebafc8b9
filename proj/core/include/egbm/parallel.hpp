#pragma once

#include <cstddef>
#include <functional>

namespace egbm {

// Runs body(i) for i in [0, count) on up to `threads` threads. Exceptions
// from the body are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int default_thread_count();

}  // namespace egbm
