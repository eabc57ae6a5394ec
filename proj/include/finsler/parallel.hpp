// finslerlab - index-ordered parallel map.
#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace finsler {

// Applies fn(i) for i in [0, count) across `threads` workers and returns the
// results in index order, so aggregation is independent of the thread count.
// threads <= 1 runs serially; 0 means hardware concurrency.
template <class T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn, int threads = 1) {
  std::vector<T> out(static_cast<size_t>(std::max(count, 0)));
  if (count <= 0) return out;
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));

  if (threads == 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += threads) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace finsler
