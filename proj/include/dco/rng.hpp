// SPDX-License-Identifier: Apache-2.0
#ifndef DCO_RNG_HPP_
#define DCO_RNG_HPP_

#include <cstdint>

namespace dco {

/// Splitmix64 mix of a base seed and a stream index, for carving independent
/// deterministic substreams out of one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace dco

#endif  // DCO_RNG_HPP_
