#pragma once

#include <functional>

namespace socv {

/// Worker count: hardware concurrency capped by SOC_VERIFY_THREADS when set.
int worker_count();

/// Runs body(i) for i in [begin, end). Indices are split into contiguous
/// chunks; the first exception thrown by any chunk is rethrown.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace socv
