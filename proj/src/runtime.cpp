#include "steklov/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace steklov {

int thread_budget() {
  if (const char* env = std::getenv("STEKLOV_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 16);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(static_cast<int>(hw == 0 ? 1 : hw), 1, 16);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace steklov
