#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace fjlab {

// Counter-style splitmix64 generator. Cheap to seed, so every logical
// stream (per server, per replication, ...) gets its own instance derived
// from the root seed; results are then independent of thread scheduling
// and of how many draws other streams consume.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Hash-chains a key path onto a root seed. Distinct paths give
  // statistically independent streams.
  static Rng substream(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(root);
    for (std::uint64_t key : path) {
      h = mix(h ^ (key * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    }
    return Rng(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  double exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

 private:
  std::uint64_t state_;
};

}  // namespace fjlab
