#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace scenegen {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dull;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Deterministic across standard libraries: the reductions below avoid the
/// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  /// k distinct indices from [0, n) in draw order (all of them when k >= n).
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    const std::size_t m = k < n ? k : n;
    for (std::size_t i = 0; i < m; ++i) std::swap(pool[i], pool[i + index(n - i)]);
    pool.resize(m);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scenegen
