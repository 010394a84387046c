#ifndef PSTAT_PARALLEL_HPP
#define PSTAT_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pstat {

/// Worker count: PSTAT_THREADS if set and positive, hardware concurrency
/// otherwise (PSTAT_THREADS=0 also means auto).
inline int thread_count() {
  if (const char* env = std::getenv("PSTAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

inline constexpr int kMaxChunks = 256;

/// Splits [0, n) into contiguous chunks, one worker thread per extra chunk.
/// body(begin, end, chunk) gets a stable chunk index in [0, kMaxChunks) and
/// must write disjoint state per chunk; results may not depend on the
/// partition.
template <typename Body>
void parallel_for(int n, const Body& body) {
  const int workers = std::min({thread_count(), n > 0 ? n : 1, kMaxChunks});
  if (workers <= 1 || n <= 1) {
    if (n > 0) body(0, n, 0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  body(0, std::min(n, chunk), 0);
  for (auto& t : threads) t.join();
}

}  // namespace pstat

#endif
