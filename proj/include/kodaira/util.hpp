// Small shared utilities: deterministic parallel loops and hashing.

#ifndef KODAIRA_UTIL_HPP
#define KODAIRA_UTIL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace kodaira {

/// Runs fn(i) for i in [0, n) on `workers` threads.  Tasks are dispatched by
/// index, so any per-index output is identical for every worker count.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next(0);
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

/// Deterministic sum of per-chunk partial sums, independent of worker count:
/// each chunk is summed sequentially, chunk results are combined in order.
template <typename T>
T deterministic_chunked_sum(std::size_t n, int workers, std::size_t chunk,
                            const std::function<T(std::size_t)>& term, T zero) {
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(nchunks, zero);
  parallel_for(nchunks, workers, [&](std::size_t c) {
    T s = zero;
    const std::size_t hi = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  T total = zero;
  for (const T& s : partial) total += s;
  return total;
}

inline uint64_t fnv1a64_bytes(const void* data, std::size_t len,
                              uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

inline uint64_t fnv1a64_str(const std::string& s, uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64_bytes(s.data(), s.size(), h);
}

}  // namespace kodaira

#endif
