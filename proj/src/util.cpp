#include "varsmooth/util.hpp"

#include <cstdio>
#include <cstdlib>

namespace vs {

int worker_count() {
  static int cached = [] {
    if (const char* env = std::getenv("VARSMOOTH_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
  }();
  return cached;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  int nw = std::min(worker_count(), count);
  if (nw <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += nw) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace vs
