#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace polysum {

// Splittable random stream: a master seed plus a task index derives an
// independent sub-stream, so parallel cells never share state.
// xoshiro256++ core seeded through splitmix64.  All distributions are
// generated from the raw 64-bit output here rather than <random>
// distributions, so sequences are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix(x);
  }

  // Independent sub-stream derived from the construction seed, not from
  // the current state, so split(k) is stable no matter how much of the
  // parent stream has been consumed.
  Rng split(std::uint64_t task) const {
    std::uint64_t h = seed_ ^ (0x9E3779B97F4A7C15ull * (task + 1));
    h = splitmix(h);
    return Rng(h ^ splitmix(h));
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

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1), both endpoints excluded
  double open01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double angle() { return 2.0 * pi() * uniform01(); }

  // Standard complex gaussian, density exp(-|z|^2)/pi (E|Z|^2 = 1):
  // |Z| = sqrt(-log u), arg Z uniform.
  std::complex<double> gaussian() {
    const double r = std::sqrt(-std::log(open01()));
    const double t = angle();
    return {r * std::cos(t), r * std::sin(t)};
  }

  std::complex<double> in_unit_disk() {
    const double r = std::sqrt(uniform01());
    const double t = angle();
    return {r * std::cos(t), r * std::sin(t)};
  }

  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t splitmix(std::uint64_t&& x) {
    std::uint64_t v = x;
    return splitmix(v);
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace polysum
