#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace matraj {

/// SplitMix64 stream. Hand-rolled so that seeded draws are bit-identical
/// across platforms and standard-library versions.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Unbiased uniform integer in [0, n), n >= 1 (rejection sampling).
  uint64_t below(uint64_t n) {
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  /// Uniformly random permutation of {0,...,n-1} (Fisher-Yates).
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      int k = static_cast<int>(below(static_cast<uint64_t>(i) + 1));
      std::swap(p[i], p[k]);
    }
    return p;
  }

 private:
  uint64_t state_;
};

/// Derives an independent-looking child seed from (base, index, salt).
inline uint64_t derive_seed(uint64_t base, uint64_t index, uint64_t salt = 0) {
  SplitRng rng(base ^ (0x6a09e667f3bcc909ull + salt * 0x3c6ef372fe94f82bull));
  uint64_t mixed = rng.next();
  return mixed ^ (index * 0x9e3779b97f4a7c15ull);
}

}  // namespace matraj
