#include <random>

#include "doctest.h"
#include "fuchs/star.hpp"

using namespace fuchs;

namespace {

constexpr int kPrec = 16;

Symbol random_symbol(const FieldParams& fp, const ThetaParam& theta, int m, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Symbol f = Symbol::zeros(fp, theta, m, N);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) f.values().data()[i] = cplx(d(rng), d(rng));
  return f;
}

GroupElement element(const FieldParams& fp, std::uint64_t u, std::int64_t num, std::int64_t den) {
  return GroupElement(PrincipalUnit::from_residue(fp, u, kPrec),
                      num == 0 ? PAdicScalar::zero(fp.p) : PAdicScalar::from_rational(fp.p, num, den, kPrec));
}

// Cell-value action of q^n sum f Omega du over cells of U_M, from the point-operator formula.
Eigen::MatrixXcd action_oracle(const Symbol& f, int M) {
  const FieldParams& fp = f.params();
  const UnitCosetGrid cells(fp, M), ugrid(fp, f.m());
  const GammaGrid tgrid(fp, f.N());
  const auto size = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXcd action = Eigen::MatrixXcd::Zero(size, size);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const PrincipalUnit u = cells.unit(k, kPrec);
    const auto row = static_cast<Eigen::Index>(ugrid.index_of(cells.rep(k)));
    for (std::size_t b = 0; b < tgrid.size(); ++b) {
      const cplx w = f.values()(row, static_cast<Eigen::Index>(b)) * fp.q_pow(fp.n) * cells.cell_volume();
      const PAdicScalar t = tgrid.rep(b, kPrec);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const PrincipalUnit u0 = cells.unit(i, kPrec);
        const PrincipalUnit r = u * u0.inverse();
        const cplx phase = psi(f.theta().value() * (r.value() - r.inverse().value()) * t);
        const std::size_t j = cells.index_of((u * u * u0.inverse()).residue(M));
        action(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += w * phase;
      }
    }
  }
  return action;
}

}  // namespace

TEST_CASE("star product quantizes to the operator product") {
  std::mt19937_64 rng(47);
  for (auto [p, n, m, N] : {std::tuple{3, 1, 3, 2}, std::tuple{5, 1, 2, 1}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const ThetaParam theta = ThetaParam::from_digits(p, {2, 1});
    const Symbol a = random_symbol(fp, theta, m, N, rng), b = random_symbol(fp, theta, m, N, rng);
    const Symbol ab = star_via_operators(a, b);
    const int M = std::max(m, N);
    CHECK(ab.m() == M);
    CHECK(ab.N() == M);
    const Eigen::MatrixXcd lhs = action_oracle(ab, M);
    const Eigen::MatrixXcd rhs = action_oracle(a, M) * action_oracle(b, M);
    CHECK((lhs - rhs).norm() < 1e-9 * rhs.norm());
    CHECK(max_abs_diff(ab, star_via_kernel(a, b)) < 1e-9);
  }
}

TEST_CASE("algebraic laws of the star product") {
  std::mt19937_64 rng(53);
  const FieldParams fp = FieldParams::make(3, 1);
  const ThetaParam theta = ThetaParam::one(3);
  const int m = 3, N = 2;
  const Symbol a = random_symbol(fp, theta, m, N, rng), b = random_symbol(fp, theta, m, N, rng),
               c = random_symbol(fp, theta, m, N, rng);
  const Symbol one = Symbol::constant(fp, theta, 1, 3, 1.0);
  CHECK(max_abs_diff(star_via_operators(star_via_operators(a, b), c),
                     star_via_operators(a, star_via_operators(b, c))) < 1e-9);
  CHECK(max_abs_diff(star_via_operators(one, a), a) < 1e-9);
  CHECK(max_abs_diff(star_via_operators(a, one), a) < 1e-9);
  CHECK(max_abs_diff(star_via_operators(a, b).conjugate(), star_via_operators(b.conjugate(), a.conjugate())) < 1e-9);

  // Trace property against the direct sum of f1 f2 over the cells.
  const IdentityCheck tr = traciality_check(a, b);
  const cplx direct = (a.values().array() * b.values().array()).sum() / 27.0;
  CHECK(std::abs(tr.rhs - direct) < 1e-12);
  CHECK(std::abs(tr.lhs - tr.rhs) < 1e-9);
  CHECK(std::abs(star_via_operators(a, b.conjugate()).integral() - (a.values().array() * b.values().conjugate().array()).sum() / 27.0) < 1e-9);

  const Symbol ab = star_via_operators(a, b);
  CHECK(ab.sup_norm() <= star_sup_bound(a, b) * (1 + 1e-9));
}

TEST_CASE("Wigner functions compose like rank-one operators") {
  std::mt19937_64 rng(59);
  const FieldParams fp = FieldParams::make(3, 1);
  const ThetaParam theta = ThetaParam::from_digits(3, {1, 2});
  const UnitCosetGrid grid(fp, 2);
  std::normal_distribution<double> d;
  auto draw = [&] {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
    for (auto& x : v) x = cplx(d(rng), d(rng));
    return ConfigFunction(grid, v);
  };
  const ConfigFunction p1 = draw(), p2 = draw(), p3 = draw(), p4 = draw();
  const Symbol lhs = star_via_operators(wigner(p1, p2, theta), wigner(p3, p4, theta));
  const Symbol w = wigner(p3, p2, theta);
  CHECK(max_abs_diff(lhs, w.with_values(w.values() * inner(p1, p4))) < 1e-9);
}

TEST_CASE("covariance of the star product") {
  std::mt19937_64 rng(61);
  const FieldParams fp = FieldParams::make(3, 1);
  const ThetaParam theta = ThetaParam::one(3);
  const Symbol a = random_symbol(fp, theta, 3, 2, rng), b = random_symbol(fp, theta, 3, 2, rng);
  CHECK(covariance_check(a, b, GroupElement::identity(fp, kPrec)) == 0.0);
  CHECK(covariance_check(a, b, element(fp, 7, 0, 1)) < 1e-9);
  CHECK(covariance_check(a, b, element(fp, 1, 5, 9)) < 1e-9);
  CHECK(covariance_check(a, b, element(fp, 16, -4, 9)) < 1e-9);
}

TEST_CASE("three-point and two-point kernels") {
  const FieldParams fp = FieldParams::make(5, 1);
  const ThetaParam theta = ThetaParam::from_digits(5, {3, 1});
  const GroupElement e = GroupElement::identity(fp, kPrec);
  std::mt19937_64 rng(67);
  std::uniform_int_distribution<std::uint64_t> ua(0, 624);
  std::uniform_int_distribution<std::int64_t> num(-300, 300);
  for (int k = 0; k < 50; ++k) {
    auto draw = [&] { return element(fp, 1 + 5 * ua(rng), num(rng), 125); };
    const GroupElement g = draw(), g1 = draw(), g2 = draw(), g3 = draw();
    const PAdicScalar angle = theta.value() * (phi(g1.u * g2.u.inverse()) * g3.t + phi(g2.u * g3.u.inverse()) * g1.t +
                                               phi(g3.u * g1.u.inverse()) * g2.t);
    CHECK(three_point_angle(theta, g1, g2, g3) == fractional_part(angle));
    CHECK(three_point_angle(theta, g * g1, g * g2, g * g3) == three_point_angle(theta, g1, g2, g3));
    CHECK(std::abs(three_point_kernel(theta, g1, g2, g3)) == doctest::Approx(25.0));
    const cplx direct = 25.0 * psi(theta.value() * (phi(g2.u) * g1.t - phi(g1.u) * g2.t));
    CHECK(std::abs(two_point_kernel(theta, g1, g2) - direct) < 1e-12);
    CHECK(std::abs(two_point_kernel(theta, g1, g2) - three_point_kernel(theta, e, g1, g2)) < 1e-12);
  }
}

TEST_CASE("mismatched parameters are rejected") {
  const FieldParams fp = FieldParams::make(3, 1);
  const Symbol a = Symbol::zeros(fp, ThetaParam::one(3), 3, 2);
  const Symbol b = Symbol::zeros(fp, ThetaParam::from_digits(3, {2}), 3, 2);
  CHECK_THROWS_AS(star_via_operators(a, b), ParameterError);
  CHECK_THROWS_AS(reconcile(a, b), ParameterError);
  const auto [x, y] = reconcile(a, Symbol::zeros(fp, ThetaParam::one(3), 2, 3));
  CHECK(x.m() == 3);
  CHECK(y.N() == 3);
}
