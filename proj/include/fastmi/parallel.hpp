#pragma once

#include <cstddef>
#include <functional>

namespace fastmi {

// Runs fn(i) for every i in [0, count) on up to `threads` workers pulling
// from a shared index counter.  Outputs must be written to preassigned slots
// so results do not depend on scheduling.  The first exception thrown by any
// call is rethrown on the caller's thread after all workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &fn);

}  // namespace fastmi
