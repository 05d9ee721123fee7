#pragma once

#include <cstddef>
#include <functional>

namespace gdsarm {

/// Worker count: SCREENING_ARM_THREADS when set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count).  Work is handed out dynamically, so the
/// body must write its result to slot i rather than depend on call order.
/// Nested calls from inside a worker run serially on that worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace gdsarm
