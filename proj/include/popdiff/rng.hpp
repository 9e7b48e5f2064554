#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace popdiff {

// Seeded generator used by every randomized operation.
//
// The engine is std::mt19937_64 seeded with the 64-bit seed through its
// single-value constructor; both are fully specified by the C++ standard, so
// streams agree across standard libraries. Bounded draws do not go through
// std::uniform_int_distribution (whose algorithm is implementation-defined):
// uniform_below() rejects raw outputs at or above the largest multiple of the
// bound and reduces the rest modulo the bound.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

// Uniformly random k-element subset of [0, universe), returned sorted.
// Floyd's algorithm; for k above universe/2 the complement is sampled instead.
inline std::vector<std::uint64_t> sample_distinct(std::uint64_t universe, std::uint64_t k, Rng& rng) {
  const bool complement = k > universe / 2;
  const std::uint64_t draws = complement ? universe - k : k;
  std::vector<bool> chosen(universe, false);
  for (std::uint64_t j = universe - draws; j < universe; ++j) {
    const std::uint64_t t = rng.uniform_below(j + 1);
    if (chosen[t])
      chosen[j] = true;
    else
      chosen[t] = true;
  }
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < universe; ++i)
    if (chosen[i] != complement) out.push_back(i);
  return out;
}

}  // namespace popdiff
