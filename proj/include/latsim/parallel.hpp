#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace latsim {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs per_trial(trial_index, acc) for every index in [0, n_trials) across
/// a static partition of contiguous blocks, one accumulator per worker,
/// merged in worker order. Totals are therefore independent of the worker
/// count and of scheduling. Acc needs a default constructor and operator+=.
/// The first exception (by lowest trial index) is rethrown.
template <class Acc, class Fn>
Acc run_trials(std::uint64_t n_trials, int threads, Fn&& per_trial) {
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_thread_count(threads), std::max<std::uint64_t>(n_trials, 1)));

  std::vector<Acc> accs(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::uint64_t> error_trial(workers, ~std::uint64_t(0));

  auto worker = [&](int w) {
    const std::uint64_t chunk = n_trials / workers;
    const std::uint64_t rem = n_trials % workers;
    const std::uint64_t begin = w * chunk + std::min<std::uint64_t>(w, rem);
    const std::uint64_t end = begin + chunk + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
    for (std::uint64_t t = begin; t < end; ++t) {
      try {
        per_trial(t, accs[w]);
      } catch (...) {
        errors[w] = std::current_exception();
        error_trial[w] = t;
        return;
      }
    }
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& th : pool) th.join();
  }

  int first_error = -1;
  for (int w = 0; w < workers; ++w)
    if (errors[w] && (first_error < 0 || error_trial[w] < error_trial[first_error])) first_error = w;
  if (first_error >= 0) std::rethrow_exception(errors[first_error]);

  Acc total{};
  for (auto& a : accs) total += a;
  return total;
}

}  // namespace latsim
