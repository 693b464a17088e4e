#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace gausscap::cli {

inline int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates compute(i) for i in [0, count) on `threads` workers and calls
/// emit(i, result) on the calling thread in index order, as soon as each
/// prefix is complete. The first exception (in index order) is rethrown
/// after the workers have stopped.
template <typename R, typename Compute, typename Emit>
void ordered_parallel(std::size_t count, int threads, Compute compute, Emit emit) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) emit(i, compute(i));
    return;
  }

  std::vector<std::optional<R>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<char> done(count, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || stop.load()) return;
      std::optional<R> r;
      std::exception_ptr e;
      try {
        r.emplace(compute(i));
      } catch (...) {
        e = std::current_exception();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        results[i] = std::move(r);
        errors[i] = e;
        done[i] = 1;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);

  std::exception_ptr failure;
  for (std::size_t i = 0; i < count && !failure; ++i) {
    std::optional<R> r;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[i] != 0; });
      if (errors[i]) {
        failure = errors[i];
        break;
      }
      r = std::move(results[i]);
      results[i].reset();
    }
    try {
      emit(i, std::move(*r));
    } catch (...) {
      failure = std::current_exception();
    }
  }
  stop.store(true);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gausscap::cli
