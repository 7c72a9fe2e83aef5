#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fpc {

// Runs fn(i) for i in [0, count). Each index must be independent of the
// others (seed its RNG from the index), so the result is identical for any
// thread count. The first exception thrown by any index is rethrown on the
// calling thread after all workers join.
inline void parallel_for_indexed(std::int64_t count, int threads,
                                 const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  int usable = std::max(1, threads);
  usable = static_cast<int>(std::min<std::int64_t>(usable, count));
  if (usable == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(usable));
  pool.reserve(static_cast<std::size_t>(usable));
  for (int t = 0; t < usable; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::int64_t i = t; i < count; i += usable) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace fpc
