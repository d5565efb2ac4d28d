#pragma once

#include <cstddef>
#include <functional>

namespace mos {

/// Worker count from MOS_THREADS (default: hardware concurrency).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mos
