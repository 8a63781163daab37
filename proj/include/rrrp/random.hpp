#pragma once

#include <cmath>
#include <cstdint>

namespace rrrp {

// splitmix64; the de-facto standard seed expander.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless combination of a seed and a counter into a fresh stream state.
// Per-sample streams keep results independent of evaluation order and thread
// count.
inline uint64_t mix_seed(uint64_t seed, uint64_t counter) {
  uint64_t s = seed;
  uint64_t a = splitmix64(s);
  s = a ^ (counter * 0xD1342543DE82EF95ull + 0x9E3779B97F4A7C15ull);
  return splitmix64(s);
}

// Small counter-seeded generator for a handful of draws.
class SampleRng {
 public:
  SampleRng(uint64_t seed, uint64_t counter) : state_(mix_seed(seed, counter)) {}

  double u01() {  // [0, 1)
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

  double normal(double mu, double sigma) {
    double u1 = u01();
    double u2 = u01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Weibull with characteristic (scale) velocity `scale` and shape `shape`.
  // scale == 0 degenerates to calm air.
  double weibull(double scale, double shape) {
    double u = u01();
    return scale * std::pow(-std::log1p(-u), 1.0 / shape);
  }

 private:
  uint64_t state_;
};

}  // namespace rrrp
