#include "mppose/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace mppose {

int worker_count() {
  // Read on every call so tests can flip the variable at runtime.
  if (const char* env = std::getenv("MPPOSE_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to hardware default
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  int workers = worker_count();
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (static_cast<std::int64_t>(workers) > count)
    workers = static_cast<int>(count);

  std::atomic<std::int64_t> next{0};
  // First exception wins; the index decides "first" so the outcome does not
  // depend on thread scheduling.
  std::atomic<std::int64_t> first_bad{count};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

  auto work = [&]() {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        std::int64_t cur = first_bad.load();
        while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::int64_t bad = first_bad.load();
  if (bad < count) std::rethrow_exception(errors[static_cast<std::size_t>(bad)]);
}

}  // namespace mppose
