#include "gns/common.hpp"

#include <atomic>
#include <cstdlib>

namespace gns {

unsigned worker_count() {
  if (const char* env = std::getenv("GNS_WORKERS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

void parallel_chunks(int chunks, const std::function<void(int)>& fn) {
  if (chunks <= 0) return;
  unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(chunks));
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int c = next.fetch_add(1);
        if (c >= chunks) return;
        fn(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gns
