#include "pdo/core.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdo {

namespace {
std::atomic<int> g_workers{0};
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int a : v)
    for (int i = 2; i <= a; ++i) f *= i;
  return f;
}

std::vector<MultiIndex> multi_indices_of_order(int n, int k) {
  std::vector<MultiIndex> out;
  if (n == 1) {
    out.emplace_back(k);
  } else {
    for (int a = k; a >= 0; --a) out.emplace_back(a, k - a);
  }
  return out;
}

std::vector<std::pair<MultiIndex, double>> sub_indices(const MultiIndex& a) {
  std::vector<std::pair<MultiIndex, double>> out;
  for (int i = 0; i <= a[0]; ++i)
    for (int k = 0; k <= a[1]; ++k) out.emplace_back(MultiIndex(i, k), binomial(a[0], i) * binomial(a[1], k));
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void set_worker_count(int workers) { g_workers = std::max(0, workers); }

int worker_count() {
  int w = g_workers.load();
  if (w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pdo
