#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cfti {

// Runs fn(i) for i in [0, count). With nthreads <= 1 (or a small count) the
// loop stays on the calling thread, which keeps single-threaded runs free of
// scheduling nondeterminism. fn must not throw across threads; workers trap
// the first exception and rethrow it on the caller.
inline void parallel_for(std::size_t count, std::size_t nthreads,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (nthreads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  nthreads = std::min(nthreads, count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace cfti
