#pragma once

#include <cstdint>
#include <random>

namespace cdiff {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded generator with platform-independent bounded draws. Streams derived
// with split() are independent of how work is later scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Rng split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL))); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace cdiff
