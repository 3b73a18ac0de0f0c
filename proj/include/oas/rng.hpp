#pragma once

#include <cstdint>
#include <random>

namespace oas {

// Seeded random stream. All variate generators are implemented on top of the
// raw 64-bit output so that a given seed reproduces the same chain on every
// platform and standard-library version. Chains must not share a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1).
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  // Gamma(shape, 1), shape > 0. Marsaglia-Tsang squeeze.
  double gamma(double shape);

  double beta(double a, double b);

  double chisq(double df) { return 2.0 * gamma(0.5 * df); }

  // Integer uniform on [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
};

}  // namespace oas
