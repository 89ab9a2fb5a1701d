#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ys::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream seed for a position (e.g. {alpha index, replicate,
// purpose}) under a master seed. Pure function of its inputs, so parallel
// schedules cannot change which stream a task sees.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t step : path) {
    state ^= out + step * 0xd1b54a32d192ed03ULL;
    out = splitmix64(state);
  }
  return out;
}

// Uniform on the open interval (0,1) from the top 53 bits.
inline double uniform_open(Engine& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ys::rng
