#pragma once

#include <cstdint>

namespace hetnetsim::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

// SplitMix64 output function applied to z + gamma.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum class Domain : std::uint64_t { Population = 1, Mobility = 2, Workload = 3, Test = 99 };

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, Domain domain, std::uint64_t entity) {
  return mix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(domain))) ^ entity);
}

// Independent SplitMix64 stream per (seed, subsystem, entity). Eight bytes of
// state, so thousands of per-user streams stay cache resident.
class Stream {
 public:
  Stream() : Stream(0, Domain::Test, 0) {}
  Stream(std::uint64_t seed, Domain domain, std::uint64_t entity) : state_(derive_seed(seed, domain, entity)) {}

  std::uint64_t bits() {
    const std::uint64_t z = state_;
    state_ += kGamma;
    return mix64(z);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace hetnetsim::rng
