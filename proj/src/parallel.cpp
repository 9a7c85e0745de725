#include "choquard/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace chq::parallel {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int count) { g_threads.store(std::max(1, count)); }

int threads() { return g_threads.load(); }

void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(threads());
  if (workers <= 1 || n < 2 * workers) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end)
      break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool)
    t.join();
}

} // namespace chq::parallel
