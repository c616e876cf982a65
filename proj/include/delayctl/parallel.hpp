#pragma once

#include <cstddef>
#include <functional>

namespace delayctl {

/// Worker cap: DELAYCTL_THREADS if set to a positive integer, else hardware concurrency (at least 1).
std::size_t worker_count();

/**
 * @brief Calls body(i) for i in [0, count) on up to worker_count() threads.
 *
 * Runs inline when one worker suffices. The first exception thrown by any
 * call is rethrown after all workers finish.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace delayctl
