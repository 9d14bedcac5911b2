#pragma once

#include <cstdint>

namespace entrate {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent seed streams derived from the master seed.
enum class SeedStream : std::uint64_t {
  Trials = 1,
  Hamiltonian = 2,
  Observable = 3,
};

/// seed = splitmix64(splitmix64(splitmix64(master) + stream) + index * golden). Pure
/// function of its arguments; trial i of system k uses index k * 2^32 + i.
inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) {
  const std::uint64_t base = splitmix64(splitmix64(master) + static_cast<std::uint64_t>(stream));
  return splitmix64(base + index * 0x9E3779B97F4A7C15ULL);
}

}  // namespace entrate
