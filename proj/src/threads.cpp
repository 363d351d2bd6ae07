#include "todabrane/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tb::threads {

int worker_count() {
  if (const char* env = std::getenv("TODA_BRANE_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to the hardware default on unparseable values
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(worker_count(), count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> cursor{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      int i = cursor.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tb::threads
