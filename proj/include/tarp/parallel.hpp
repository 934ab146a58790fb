#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace tarp {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out by index, so results written to slot i do not depend on the
/// worker count. If any call throws, the exception from the lowest failing
/// index is rethrown after all workers finish.
inline void parallel_for_index(std::size_t count, unsigned threads,
                               const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(k);
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tarp
