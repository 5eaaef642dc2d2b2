#pragma once

#include <cstddef>
#include <functional>

namespace dzak {

/// Worker cap: DZAK_THREADS if set and positive, otherwise hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers write
/// results into slot i so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dzak
