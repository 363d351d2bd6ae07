#pragma once

#include <functional>

namespace tb::threads {

/// Worker cap: TODA_BRANE_THREADS if set and positive, hardware concurrency
/// otherwise, never less than 1.
int worker_count();

/// Runs fn(0)..fn(count-1), splitting across workers when count > 1 and more
/// than one worker is available. Exceptions propagate to the caller; if
/// several tasks throw, one of the exceptions is rethrown.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace tb::threads
