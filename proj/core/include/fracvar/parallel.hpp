#pragma once

#include <cstddef>
#include <functional>

namespace fracvar {

/// Thread cap for node-parallel loops. Reads FRACVAR_THREADS once per
/// process; unset or invalid values mean serial execution.
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n). Splits the index range into contiguous
/// chunks when more than one thread is allowed; every index is handled by
/// exactly one thread, so results are bit-identical to the serial order as
/// long as fn(i) only writes to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracvar
