#pragma once

#include <functional>

namespace odisal {

/// Runs fn(i) for i in [0, n) across up to `jobs` threads in contiguous
/// static chunks. Work items must write disjoint state; outputs are then
/// bitwise-independent of the job count.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace odisal
