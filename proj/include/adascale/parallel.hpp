// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace adascale {

/// Worker count: ADASCALE_THREADS when set to a positive integer, else the
/// hardware concurrency.
int thread_budget();

/// Runs fn(i) for i in [0, n) on up to thread_budget() threads. Callers
/// write results into per-index slots so output order never depends on
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace adascale
