#ifndef HCR_PARALLEL_HPP
#define HCR_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hcr {

/// Worker count: HCR_THREADS if set and positive, else hardware concurrency.
std::size_t thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads. The
/// first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hcr

#endif  // HCR_PARALLEL_HPP
