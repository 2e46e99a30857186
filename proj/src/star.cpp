#include "fuchs/star.hpp"

#include <algorithm>

#include "fuchs/parallel.hpp"

namespace fuchs {

std::pair<Symbol, Symbol> reconcile(const Symbol& f1, const Symbol& f2) {
  if (!(f1.params() == f2.params())) throw ParameterError("symbols over different fields");
  if (!(f1.theta() == f2.theta())) throw ParameterError("theta mismatch between symbols");
  const int m = std::max(f1.m(), f2.m()), N = std::max(f1.N(), f2.N());
  return {f1.refined(m, N), f2.refined(m, N)};
}

Symbol star_via_operators(const Symbol& f1, const Symbol& f2) {
  const auto [a, b] = reconcile(f1, f2);
  return symbol_of_operator(compose(quantize_direct(a), quantize_direct(b)), a.theta());
}

Symbol star_via_kernel(const Symbol& f1, const Symbol& f2) {
  const auto [a, b] = reconcile(f1, f2);
  const FieldParams& fp = a.params();
  const int M = kernel_scale(a), N = a.N();
  UnitCosetGrid grid(fp, M);
  ResidueRing ring(fp.p, M);
  RootTable roots(fp.p, M);
  const std::uint64_t theta = a.theta().residue(M);
  const std::uint64_t spread = fp.p_pow(M - N);
  const std::size_t usize = grid.size();
  const auto tin = static_cast<std::size_t>(a.values().cols());

  // phi_tab[i][j] = theta phi(u_i / u_j) mod p^M.
  std::vector<std::uint64_t> phi_tab(usize * usize);
  for (std::size_t i = 0; i < usize; ++i)
    for (std::size_t j = 0; j < usize; ++j)
      phi_tab[i * usize + j] = ring.mul(theta, ring.phi(ring.mul(grid.rep(i), ring.inv(grid.rep(j)))));

  Symbol out = Symbol::zeros(fp, a.theta(), M, M);
  const auto tout = static_cast<std::size_t>(out.values().cols());
  const double weight = fp.q_pow(2.0 * fp.n) * grid.cell_volume() * grid.cell_volume();
  parallel_for(usize, [&](std::size_t ui) {
    for (std::size_t bt = 0; bt < tout; ++bt) {
      cplx acc = 0.0;
      for (std::size_t u1 = 0; u1 < usize; ++u1) {
        const auto r1 = static_cast<Eigen::Index>(grid.parent(u1, a.m()));
        const std::uint64_t a_u_u1 = phi_tab[ui * usize + u1];
        for (std::size_t u2 = 0; u2 < usize; ++u2) {
          const auto r2 = static_cast<Eigen::Index>(grid.parent(u2, b.m()));
          const std::uint64_t base = ring.mul(phi_tab[u1 * usize + u2], bt);
          const std::uint64_t a_u2_u = phi_tab[u2 * usize + ui];
          for (std::size_t b1 = 0; b1 < tin; ++b1) {
            const cplx v1 = a.values()(r1, static_cast<Eigen::Index>(b1));
            if (v1 == 0.0) continue;
            const std::uint64_t s1 = ring.add(base, ring.mul(a_u2_u, b1 * spread));
            for (std::size_t b2 = 0; b2 < tin; ++b2) {
              const std::uint64_t ang = ring.add(s1, ring.mul(a_u_u1, b2 * spread));
              acc += roots(ang) * v1 * b.values()(r2, static_cast<Eigen::Index>(b2));
            }
          }
        }
      }
      out.values()(static_cast<Eigen::Index>(ui), static_cast<Eigen::Index>(bt)) = acc * weight;
    }
  });
  return out;
}

CharacterAngle three_point_angle(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2,
                                 const GroupElement& g3) {
  const PAdicScalar x = phi(g1.u * g2.u.inverse()) * g3.t + phi(g2.u * g3.u.inverse()) * g1.t +
                        phi(g3.u * g1.u.inverse()) * g2.t;
  return fractional_part(theta.value() * x);
}

cplx three_point_kernel(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2,
                        const GroupElement& g3) {
  const FieldParams& fp = g1.params();
  return fp.q_pow(2.0 * fp.n) * three_point_angle(theta, g1, g2, g3).value();
}

cplx two_point_kernel(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2) {
  const FieldParams& fp = g1.params();
  const PAdicScalar x = phi(g2.u) * g1.t - phi(g1.u) * g2.t;
  return fp.q_pow(2.0 * fp.n) * fractional_part(theta.value() * x).value();
}

IdentityCheck traciality_check(const Symbol& f1, const Symbol& f2) {
  const auto [a, b] = reconcile(f1, f2);
  const cplx lhs = star_via_operators(a, b).integral();
  const cplx rhs = (a.values().array() * b.values().array()).sum() * a.params().q_pow(-a.m());
  return {lhs, rhs};
}

double covariance_check(const Symbol& f1, const Symbol& f2, const GroupElement& g) {
  const Symbol lhs = translate(star_via_operators(f1, f2), g);
  const Symbol rhs = star_via_operators(translate(f1, g), translate(f2, g));
  return max_abs_diff(lhs, rhs);
}

double star_sup_bound(const Symbol& f1, const Symbol& f2) {
  const FieldParams& fp = f1.params();
  auto support_volume = [](const Symbol& f) {
    const auto cells = (f.values().array() != cplx(0.0)).count();
    return static_cast<double>(cells) * f.params().q_pow(-f.m());
  };
  return fp.q_pow(2.0 * fp.n) * support_volume(f1) * support_volume(f2) * f1.sup_norm() * f2.sup_norm();
}

}  // namespace fuchs
