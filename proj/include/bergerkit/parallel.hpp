#pragma once

#include <cstddef>
#include <functional>

namespace bergerkit {

// Worker count: BERGERKIT_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Calls fn(i) for i in [0, n) over thread_count() workers. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bergerkit
