#pragma once

#include <functional>

namespace shapedc {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items are
/// handed out dynamically, so fn must only write to state owned by item i;
/// callers reduce per-item results in index order to stay independent of the
/// worker count. Exceptions from fn are rethrown on the calling thread.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// Worker count to use when none was requested (requested <= 0): the
/// SHAPE_DC_WORKERS environment variable if set, else hardware concurrency.
int resolve_workers(int requested);

}  // namespace shapedc
