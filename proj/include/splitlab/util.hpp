#ifndef SPLITLAB_UTIL_HPP
#define SPLITLAB_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace splitlab {

// SplitMix64.  Fully specified, so streams are identical on every platform;
// used wherever reproducible pseudo-random samples are needed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

// Shortest text that round-trips a double; 17 significant digits.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Index-parallel loop.  Each job must be pure and write only to its own
// slot, so the result is independent of the schedule.  threads == 0 picks
// the hardware count, threads == 1 runs inline.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  unsigned want = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (want <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (want > n) want = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (unsigned t = 0; t < want; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += want) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace splitlab

#endif  // SPLITLAB_UTIL_HPP
