#ifndef CMK_RNG_HPP
#define CMK_RNG_HPP

#include <cstdint>

namespace cmk {

// splitmix64 finalizer; the basis for everything random in this project so
// that runs are reproducible bit-for-bit across platforms.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double u64_to_unit(uint64_t x) {
  // 53 high bits -> [0,1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Sequential stream generator (instance generators, test data).
class StreamRng {
 public:
  explicit StreamRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  double uniform() { return u64_to_unit(next_u64()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0.
  uint64_t below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t state_;
};

// Counter-based generator: the draw for key (a, b, c) depends only on
// (seed, a, b, c), so substreams are independent of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t at(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    uint64_t h = splitmix64(seed_ ^ splitmix64(a));
    h = splitmix64(h ^ splitmix64(b ^ 0x517cc1b727220a95ULL));
    return splitmix64(h ^ splitmix64(c ^ 0x2545f4914f6cdd1dULL));
  }

  double uniform_at(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    return u64_to_unit(at(a, b, c));
  }

 private:
  uint64_t seed_;
};

}  // namespace cmk

#endif
