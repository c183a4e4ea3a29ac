#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace qvor {

enum class Execution { kSerial, kParallel };

// Runs body(i) for i in [0, n). Iterations must write disjoint outputs, so
// results do not depend on the worker count. The first exception thrown by
// any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

// Number of OpenMP workers available to parallel_for.
int worker_count();
void set_worker_count(int n);

}  // namespace qvor
