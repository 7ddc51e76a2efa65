#pragma once

#include <cstddef>
#include <functional>

namespace ramified {

/// Worker count: `requested` if nonzero, else hardware concurrency; in both
/// cases capped by the RT_THREADS environment variable when it is set.
std::size_t thread_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Tasks are handed
/// out dynamically; callers write results into per-index slots so the
/// outcome does not depend on the schedule. The exception of the lowest failing index
/// is rethrown after all workers have joined.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace ramified
