#pragma once

#include <cstddef>
#include <functional>

namespace wulff {

/// Worker count: WULFF_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
int thread_count();

/// Runs body(begin, end) over a static partition of [0, n). Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wulff
