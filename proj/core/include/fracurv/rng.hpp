#pragma once

#include <cstdint>
#include <vector>

namespace fracurv {

// Counter-based splittable randomness. Every draw is a pure function of a
// 64-bit key, so label assignment is reproducible regardless of traversal
// order, thread count, or how deep a tree has been generated so far. Keys are
// built by chaining the avalanche mix over (seed, level, node identity, salt).

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

// Identity of a tree node: a per-tree base key chained with each letter
// along the node's path.
inline std::uint64_t path_key(std::uint64_t base, int letter) {
  return mix_key(base, 0xA0761D6478BD642Full + static_cast<std::uint64_t>(letter));
}

// u in [0, 1), 53 random bits
inline double key_uniform(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by scaling; n is tiny here (alphabet sizes), so
// the modulo bias of a 53-bit mantissa is far below anything observable.
inline int key_index(std::uint64_t key, int n) {
  int i = static_cast<int>(key_uniform(key) * n);
  return i >= n ? n - 1 : i;
}

// Inversion sampling of a finite distribution given cumulative weights.
inline int key_discrete(std::uint64_t key, const std::vector<double>& cdf) {
  const double u = key_uniform(key);
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
    if (u < cdf[i]) return static_cast<int>(i);
  return static_cast<int>(cdf.size()) - 1;
}

// Per-replicate root seeds for Monte Carlo runs.
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t rep) {
  return mix_key(master, 0x8BB84B93962EACC9ull + rep);
}

}  // namespace fracurv
