#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace modspec {

/// Thread cap from MODSPEC_THREADS (unset or invalid: the OpenMP default).
int configured_threads();

/// Runs body(i) for i in [0, count) on up to configured_threads() threads. Each
/// index is processed by exactly one thread; the first exception (lowest index)
/// is rethrown after the loop. Callers write results into per-index slots and
/// reduce serially, so outputs do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace modspec
