#ifndef EBMEANS_RNG_HPP
#define EBMEANS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace ebmeans {

// SplitMix64 keyed by a list of stream components. Every random quantity in
// the simulation harness draws from its own stream — e.g. {tag, seed, i, d} —
// so generation order and thread scheduling never affect the values.
class StreamRng {
 public:
  explicit StreamRng(std::initializer_list<std::uint64_t> key) {
    for (std::uint64_t c : key) state_ = mix(state_ ^ c);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // uniform on [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal pair via Box-Muller
  void normal_pair(double& z1, double& z2) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    z1 = r * std::cos(a);
    z2 = r * std::sin(a);
  }

  double normal() {
    double z1, z2;
    normal_pair(z1, z2);
    return z1;
  }

  double exponential() { return -std::log(1.0 - uniform01()); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_ = 0x8C2F9D4B1A6E3C75ULL;
};

}  // namespace ebmeans

#endif
