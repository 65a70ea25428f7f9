#pragma once

#include <cstdint>
#include <random>

namespace subharmonic::sim {

using Engine = std::mt19937_64;

/// Independent stream for one replicate. The seed sequence mixes both 64-bit
/// keys, so streams do not depend on the order replicates are run in.
inline Engine replicate_engine(std::uint64_t seed, std::uint64_t replicate_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate_index),
                    static_cast<std::uint32_t>(replicate_index >> 32), 0x53484152U};
  return Engine(seq);
}

}  // namespace subharmonic::sim
