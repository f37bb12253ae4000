#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace carleman {

/// Worker count: set_worker_count() if called, else CARLEMAN_THREADS, else
/// hardware concurrency.
int worker_count();
void set_worker_count(int n);  // n <= 0 restores the default

/// Runs task(i) for i in [0, n) on up to worker_count() threads. Results
/// land at index i, so any later reduction sees them in index order
/// whatever the thread count.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& task);

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& task) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = task(i); });
  return out;
}

}  // namespace carleman
