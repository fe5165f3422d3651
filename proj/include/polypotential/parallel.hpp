#pragma once

#include <cstddef>
#include <functional>

namespace polypotential {

/// Worker count: POLYPOTENTIAL_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) over contiguous blocks, one block per
/// worker. Each index is processed exactly once, so writing results into
/// slot i keeps output ordering independent of scheduling. The first
/// exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace polypotential
