#pragma once

#include <cstddef>
#include <functional>

namespace sarkit {

/// Runs fn(i) for every i in [0, count) across up to `jobs` worker threads
/// (jobs <= 0 means all hardware threads). fn must confine its writes to
/// per-index slots; the call rethrows the first exception any worker raised.
void parallel_indices(std::size_t count, int jobs,
                      const std::function<void(std::size_t)>& fn);

}  // namespace sarkit
