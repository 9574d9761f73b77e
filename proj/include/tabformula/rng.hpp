#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "tabformula/table.hpp"

namespace tabformula {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) { return splitmix64(seed ^ splitmix64(value)); }

/// Seed of one (table, formula cell) unit. Independent of processing order, so
/// sharded and parallel runs reproduce the serial stream.
inline std::uint64_t unit_seed(std::uint64_t global_seed, std::string_view table_id, const CellAddress& cell) {
  std::uint64_t s = mix_seed(global_seed, fnv1a64(table_id));
  s = mix_seed(s, static_cast<std::uint64_t>(cell.row));
  return mix_seed(s, static_cast<std::uint64_t>(cell.col));
}

inline std::uint64_t stream_seed(std::uint64_t unit, std::string_view tag) { return mix_seed(unit, fnv1a64(tag)); }

/// mt19937_64 with library-independent bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tabformula
