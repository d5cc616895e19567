#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cgof {

/// Process-wide worker count used by Monte Carlo loops. 0 = hardware default.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
///
/// Work is split into contiguous chunks; bodies must be independent and
/// write only to slots they own, so results do not depend on the worker
/// count. Exceptions are captured and rethrown on the caller thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cgof
