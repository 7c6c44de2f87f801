#pragma once
// Pinned pseudorandom generator: SplitMix64 (Steele, Lea & Flood, "Fast
// splittable pseudorandom number generators", OOPSLA 2014).
//
// The generator is pinned by algorithm, not by library: the same seed
// produces the same bit stream on every platform and toolchain, which the
// reproducibility contract (byte-identical result files) depends on.
// std::'s distribution objects are implementation-defined and must not be
// used anywhere results are recorded.

#include <cstdint>

namespace mfmab {

// SplitMix64 output mixing function; also used as a stable 64-bit hash.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform double in [0, 1), from the top 53 bits of the next output.
  double next_u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stable per-trial seed derived from (master seed, grid index, trial index).
// Independent of execution order and worker count, so parallel sweeps
// reproduce the single-threaded results exactly.
inline std::uint64_t trial_seed(std::uint64_t master_seed,
                                std::uint64_t grid_index,
                                std::uint64_t trial) {
  std::uint64_t h = mix64(master_seed + 0x9e3779b97f4a7c15ull * (grid_index + 1));
  return mix64(h ^ (0xd1b54a32d192ed03ull * (trial + 1)));
}

}  // namespace mfmab
