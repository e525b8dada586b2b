#pragma once

#include <cstdint>
#include <random>

namespace coalnet {

// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed derivation: the same (seed, salt) pair always maps to the
// same sub-seed, and distinct salts give decorrelated streams.
inline std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (salt + 1));
}

// Seeded generator with explicit uniform mappings. The standard distributions
// are implementation-defined, so all draws go through these fixed algorithms;
// equal seeds give bit-equal draw sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1): top 53 bits of one engine output.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform integer in [0, n) by rejection; n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coalnet
