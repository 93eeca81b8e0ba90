#pragma once

#include <cstdint>
#include <random>

namespace qchaos {

struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent sub-streams derived from one master seed.
enum class SeedStream : std::uint64_t {
  Hamiltonian = 0x48,
  InitialState = 0x49,
};

/// sub = splitmix64(splitmix64(master ^ stream) + index)
inline RngSeed derive_seed(RngSeed master, SeedStream stream, std::uint64_t index = 0) {
  const auto tagged = splitmix64(master.value ^ static_cast<std::uint64_t>(stream));
  return RngSeed{splitmix64(tagged + index)};
}

using Engine = std::mt19937_64;

inline Engine make_engine(RngSeed seed) { return Engine(seed.value); }

}  // namespace qchaos
