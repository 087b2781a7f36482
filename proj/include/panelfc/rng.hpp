#pragma once

#include <cstdint>
#include <random>

namespace panelfc {

using Rng = std::mt19937_64;

// splitmix64 step; used to whiten seeds and derive substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based substream key: independent of execution order, so cell r of
// replication s always sees the same stream regardless of how the grid is
// scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t substream = 0) {
  std::uint64_t s = master;
  (void)splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
  (void)splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (substream + 1);
  return splitmix64(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace panelfc
