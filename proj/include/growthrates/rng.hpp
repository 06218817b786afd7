#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace growthrates {

// xoshiro256++ seeded through splitmix64. Streams are bit-reproducible
// across platforms; generated test fixtures depend on that.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller; always consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Counter-based split: stream `key` of this generator's seed. Deterministic
  // and independent of how much the parent stream has been consumed.
  Rng substream(std::uint64_t key) const {
    std::uint64_t x = seed_ ^ (0x9E3779B97F4A7C15ULL + key);
    splitmix64(x);  // extra round decorrelates adjacent keys
    return Rng(splitmix64(x));
  }

  std::uint64_t seed() const { return seed_; }

  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& e : v) e = normal();
    return v;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
  std::uint64_t seed_;
};

}  // namespace growthrates
