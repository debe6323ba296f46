#pragma once

#include <cstddef>
#include <functional>

namespace fraktur {

/// Hardware parallelism, capped by the FRAKTUR_THREADS environment variable.
unsigned worker_count();

/// Calls fn(begin, end) on disjoint chunks covering [0, n). Chunks of at least
/// `grain` indices run on up to worker_count() threads. The first exception
/// thrown by any chunk is rethrown on the caller's thread.
void parallel_for(std::size_t n, std::size_t grain, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fraktur
