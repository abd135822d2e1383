#pragma once

#include <cstddef>
#include <functional>

namespace dhilb {

/// Process-wide bound on worker threads (default 1).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, n) on up to max_threads() workers. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dhilb
