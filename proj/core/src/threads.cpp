#include "jsrcert/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace jsrcert {

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("JSRCERT_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (...) {
      // Unparseable values keep the hardware default.
    }
  }
  return n;
}

void parallel_chunks(std::int64_t total,
                     const std::function<void(std::int64_t, std::int64_t, int)>& body) {
  if (total <= 0) return;
  int workers = std::min<std::int64_t>(thread_count(), total);
  if (workers <= 1) {
    body(0, total, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::int64_t base = total / workers, rem = total % workers;
  std::int64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    std::int64_t len = base + (w < rem ? 1 : 0);
    std::int64_t end = begin + len;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace jsrcert
