#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

// Self-contained xoshiro256** generator with splitmix64 seeding.
// std::mt19937 + distributions are not byte-stable across standard
// libraries, and several artifacts (selftest, ensemble CSVs) must be
// reproducible to the byte from a seed alone.

namespace bohr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  // Independent stream for member i of an ensemble; safe to construct in
  // any order, so parallel loops can draw per-index streams.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform angle in [0, 2*pi).
  double next_angle() { return 6.283185307179586476925286766559 * next_double(); }

  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Uniform on the closed unit disk via the polar map.
  std::complex<double> next_in_disk() {
    const double r = std::sqrt(next_double());
    return std::polar(r, next_angle());
  }

  // Uniform integer in [0, n), n >= 1, by rejection (unbiased).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bohr
