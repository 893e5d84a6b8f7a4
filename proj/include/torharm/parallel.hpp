#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace torharm {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// static chunked loop over [0, n); fn(i) must only write to slot i of
// preallocated output so results are deterministic regardless of thread count
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn,
                         int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<size_t>(threads, n));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mx;
  size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mx);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// bounded pool for independent coarse-grained jobs (FD sweeps); results are
// merged by slot index, so ordering is reproducible
template <class R>
std::vector<R> run_jobs(const std::vector<std::function<R()>>& jobs,
                        int threads = 0) {
  std::vector<R> out(jobs.size());
  parallel_for(jobs.size(), [&](size_t i) { out[i] = jobs[i](); }, threads);
  return out;
}

}  // namespace torharm
