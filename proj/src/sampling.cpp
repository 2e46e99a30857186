#include "fuchs/sampling.hpp"

#include <vector>

namespace fuchs {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("empty sampling range");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % bound;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

cplx Rng::complex() {
  const double re = uniform(-1.0, 1.0);
  const double im = uniform(-1.0, 1.0);
  return {re, im};
}

Symbol random_symbol(Rng& rng, const FieldParams& params, const ThetaParam& theta, int m, int N) {
  Symbol f = Symbol::zeros(params, theta, m, N);
  for (Eigen::Index a = 0; a < f.values().rows(); ++a)
    for (Eigen::Index b = 0; b < f.values().cols(); ++b) f.values()(a, b) = rng.complex();
  return f;
}

ConfigFunction random_config(Rng& rng, const UnitCosetGrid& grid) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex();
  return ConfigFunction(grid, v);
}

GroupElement random_group_element(Rng& rng, const FieldParams& params, int scale, int T) {
  const int prec = max_precision(params.p);
  UnitCosetGrid grid(params, scale);
  const PrincipalUnit u = PrincipalUnit::from_residue(params, grid.rep(rng.below(grid.size())), prec);
  if (T <= 0) return GroupElement(u, PAdicScalar::zero(params.p));
  const std::uint64_t den = params.p_pow(T);
  const std::uint64_t c = rng.below(den);
  const PAdicScalar t = c == 0 ? PAdicScalar::zero(params.p)
                               : PAdicScalar::from_rational(params.p, static_cast<std::int64_t>(c),
                                                            static_cast<std::int64_t>(den), prec);
  return GroupElement(u, t);
}

ThetaParam random_theta(Rng& rng, int p, int digits) {
  std::vector<int> d(static_cast<std::size_t>(digits));
  d[0] = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1)));
  for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
  return ThetaParam::from_digits(p, d);
}

}  // namespace fuchs
