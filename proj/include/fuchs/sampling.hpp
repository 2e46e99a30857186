#pragma once

// Deterministic random inputs for verification runs. Only the raw 64-bit output of
// mt19937_64 is used, so a seed reproduces the same values on every platform.

#include <cstdint>
#include <random>

#include "fuchs/quantize.hpp"

namespace fuchs {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Real and imaginary parts uniform in [-1, 1).
  cplx complex();

 private:
  std::mt19937_64 engine_;
};

Symbol random_symbol(Rng& rng, const FieldParams& params, const ThetaParam& theta, int m, int N);
ConfigFunction random_config(Rng& rng, const UnitCosetGrid& grid);
// u uniform over U_n / U_scale, t = c / p^T with c uniform below p^T (t = 0 when T = 0).
GroupElement random_group_element(Rng& rng, const FieldParams& params, int scale, int T);
// Unit with random digits and nonzero leading digit.
ThetaParam random_theta(Rng& rng, int p, int digits);

}  // namespace fuchs
