#pragma once

#include <cstddef>
#include <functional>

namespace machlimit {

/// Worker cap: MACHLIMIT_THREADS when set, hardware concurrency otherwise.
int max_threads();

/// Run fn(i) for i in [0, count) on up to max_threads() workers. Falls back
/// to a serial loop for small counts. fn must not touch shared mutable
/// state; exceptions propagate to the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace machlimit
