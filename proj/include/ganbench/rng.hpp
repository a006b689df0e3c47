#pragma once

#include <cstdint>
#include <random>

namespace ganbench {

using Rng = std::mt19937_64;

// Derives an independent stream from a base seed and a stream tag, so that
// e.g. weight init and data shuffling never share a sequence.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace ganbench
