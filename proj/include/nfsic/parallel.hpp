#pragma once

#include <functional>

namespace nfsic {

// Worker cap: NFSIC_THREADS when set, otherwise hardware concurrency.
int max_threads();

// Runs fn(0..count-1) across worker threads. Nested calls run inline, and
// callers must make fn(i) touch only slot-i state so results are
// independent of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace nfsic
