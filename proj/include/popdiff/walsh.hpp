#pragma once

#include <cstdint>
#include <span>

namespace popdiff {

// In-place unnormalized Walsh-Hadamard transform of a length-2^n vector.
//
// Arithmetic is in the ring Z/2^64 (unsigned wrap-around). Every caller in this
// library transforms integer data whose exact final result lies in [0, 2^64),
// so the wrapped result equals the true integer even though intermediate
// butterflies may exceed 64 bits. Applying the transform twice multiplies by 2^n.
inline void walsh_hadamard(std::span<std::uint64_t> values) {
  const std::size_t size = values.size();
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t j = block; j < block + half; ++j) {
        const std::uint64_t u = values[j];
        const std::uint64_t v = values[j + half];
        values[j] = u + v;
        values[j + half] = u - v;
      }
    }
  }
}

}  // namespace popdiff
