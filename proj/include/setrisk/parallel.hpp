#ifndef SETRISK_PARALLEL_HPP
#define SETRISK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace setrisk {

/// Worker count: SETRISK_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Results must be written to distinct slots;
/// the first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace setrisk

#endif  // SETRISK_PARALLEL_HPP
