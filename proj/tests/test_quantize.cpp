#include <random>

#include "doctest.h"
#include "fuchs/quantize.hpp"

using namespace fuchs;

namespace {

constexpr int kPrec = 16;

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXcd a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = cplx(d(rng), d(rng));
  return a;
}

Symbol random_symbol(const FieldParams& fp, const ThetaParam& theta, int m, int N, std::mt19937_64& rng) {
  const Symbol z = Symbol::zeros(fp, theta, m, N);
  return z.with_values(random_matrix(z.values().rows(), z.values().cols(), rng));
}

ConfigFunction random_config(const UnitCosetGrid& g, std::mt19937_64& rng) {
  return ConfigFunction(g, random_matrix(static_cast<Eigen::Index>(g.size()), 1, rng).col(0));
}

// Cell-value matrix of q^n sum f(u,[t]) Omega(u,[t]) du, with
// Omega(u,t) phi(u0) = Psi(theta (u u0^{-1} - u0 u^{-1}) t) phi(u^2 u0^{-1}), evaluated in Q_p.
Eigen::MatrixXcd quantize_oracle(const Symbol& f, int M) {
  const FieldParams& fp = f.params();
  const UnitCosetGrid cells(fp, M), ugrid(fp, f.m());
  const GammaGrid tgrid(fp, f.N());
  const auto size = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXcd action = Eigen::MatrixXcd::Zero(size, size);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const PrincipalUnit u = cells.unit(k, kPrec);
    const std::size_t row = ugrid.index_of(cells.rep(k));
    for (std::size_t b = 0; b < tgrid.size(); ++b) {
      const cplx w = f.values()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b)) * fp.q_pow(fp.n) *
                     cells.cell_volume();
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

TEST_CASE("quantization matches the point-operator integral") {
  std::mt19937_64 rng(29);
  for (auto [p, n, m, N] : {std::tuple{3, 1, 3, 2}, std::tuple{5, 1, 2, 1}, std::tuple{3, 2, 4, 2}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const ThetaParam theta = ThetaParam::from_digits(p, {1, 1});
    const Symbol f = random_symbol(fp, theta, m, N, rng);
    const OperatorKernel a = quantize_direct(f);
    REQUIRE(a.scale() == kernel_scale(f));
    CHECK(a.scale() == std::max(m, N));
    const Eigen::MatrixXcd oracle = quantize_oracle(f, a.scale());
    CHECK((a.action() - oracle).norm() < 1e-10 * oracle.norm());
    CHECK(max_abs_diff(kernel_formula(f), a) < 1e-10);
  }
}

TEST_CASE("Hilbert-Schmidt isometry, adjoints and inversion") {
  std::mt19937_64 rng(31);
  for (auto [p, n, m, N] : {std::tuple{3, 1, 3, 2}, std::tuple{5, 1, 2, 1}, std::tuple{3, 2, 4, 2}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const ThetaParam theta = ThetaParam::from_digits(p, {p - 1});
    const Symbol f = random_symbol(fp, theta, m, N, rng);
    const OperatorKernel a = quantize_direct(f);
    const auto [hs, l2] = hs_isometry_check(f);
    CHECK(hs == doctest::Approx(a.hs_norm2()));
    CHECK(hs == doctest::Approx(fp.q_pow(n) * f.l2_norm2()).epsilon(1e-10));
    CHECK(max_abs_diff(quantize_direct(f.conjugate()), a.adjoint()) < 1e-10);
    const Symbol back = symbol_of_operator(a, theta);
    CHECK(back.m() == a.scale());
    CHECK(back.N() == a.scale());
    CHECK(max_abs_diff(back, f) < 1e-10);
  }
}

TEST_CASE("the constant symbol quantizes to the identity") {
  for (auto [p, n, m] : {std::tuple{3, 1, 3}, std::tuple{5, 1, 2}, std::tuple{3, 2, 3}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const ThetaParam theta = ThetaParam::one(p);
    // The t-slot must resolve p^{-m}O for the u-delta at scale m.
    const OperatorKernel id = quantize_direct(Symbol::constant(fp, theta, n, m, 1.0));
    CHECK(id.scale() == m);
    CHECK(max_abs_diff(id, OperatorKernel::identity(fp, m)) < 1e-10);
    const Symbol one = symbol_of_operator(OperatorKernel::identity(fp, m), theta);
    CHECK((one.values().array() - cplx(1.0)).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Wigner functions") {
  std::mt19937_64 rng(37);
  const FieldParams fp = FieldParams::make(3, 1);
  const ThetaParam theta = ThetaParam::from_digits(3, {2});
  const UnitCosetGrid grid(fp, 3);
  const ResidueRing ring(3, 3);
  const ConfigFunction p1 = random_config(grid, rng), p2 = random_config(grid, rng);
  const Symbol W = wigner(p1, p2, theta);
  CHECK(W.m() == 3);
  CHECK(W.N() == 3);
  // At [e]: <phi1, phi2(1/.)>.
  cplx at_e = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    at_e += std::conj(p1.values()(static_cast<Eigen::Index>(i))) * p2.at(ring.inv(grid.rep(i))) * grid.cell_volume();
  CHECK(std::abs(W.values()(0, 0) - at_e) < 1e-12);
  CHECK(max_abs_diff(quantize_direct(W), OperatorKernel::rank_one(p2, p1)) < 1e-10);
  CHECK(W.sup_norm() <= fp.q_pow(-1) * p1.sup_norm() * p2.sup_norm() * (1 + 1e-12));

  // Point operators: involutive, and invariant under t -> t + p^{-n}O.
  const GroupElement g(PrincipalUnit::from_residue(fp, 7, kPrec), PAdicScalar::from_rational(3, 5, 27, kPrec));
  const ConfigFunction once = omega_point(g, p1, theta);
  const ConfigFunction twice = omega_point(g, once, theta);
  CHECK((twice.refined(std::max(twice.scale(), p1.scale())).values() -
         p1.refined(std::max(twice.scale(), p1.scale())).values()).norm() < 1e-12);
  const GroupElement shifted(g.u, g.t + PAdicScalar::from_rational(3, 2, 3, kPrec));
  CHECK((omega_point(shifted, p1, theta).values() - once.values()).norm() < 1e-12);
}

TEST_CASE("u-only symbols give multiplication operators, t-only symbols give convolutions") {
  std::mt19937_64 rng(41);
  const FieldParams fp = FieldParams::make(3, 1);
  const ThetaParam theta = ThetaParam::one(3);
  const int m = 3;
  Symbol fu = Symbol::zeros(fp, theta, m, m);
  for (Eigen::Index a = 0; a < fu.values().rows(); ++a) fu.values().row(a).setConstant(cplx(a + 1.0, 0.5));
  Eigen::MatrixXcd off = quantize_direct(fu).kernel();
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);

  Symbol ft = Symbol::zeros(fp, theta, m, m);
  for (Eigen::Index b = 0; b < ft.values().cols(); ++b) ft.values().col(b).setConstant(cplx(0.25, b - 1.0));
  const OperatorKernel kt = quantize_direct(ft);
  const UnitCosetGrid g = kt.grid();
  const ResidueRing r(3, g.scale());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      // Compare with the entry at (u0 / v, 1).
      const std::size_t k = g.index_of(r.mul(g.rep(i), r.inv(g.rep(j))));
      CHECK(std::abs(kt.kernel()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                     kt.kernel()(static_cast<Eigen::Index>(k), 0)) < 1e-12);
    }
}

TEST_CASE("covariance under the group action") {
  std::mt19937_64 rng(43);
  for (auto [p, n, m, N] : {std::tuple{3, 1, 3, 2}, std::tuple{5, 1, 2, 1}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const ThetaParam theta = ThetaParam::from_digits(p, {1, 2});
    const Symbol f = random_symbol(fp, theta, m, N, rng);
    for (std::int64_t num : {0, 1, 4, 7}) {
      const GroupElement g(PrincipalUnit::from_residue(fp, 1 + fp.p_pow(n) * 2, kPrec),
                           num == 0 ? PAdicScalar::zero(p)
                                    : PAdicScalar::from_rational(p, num, static_cast<std::int64_t>(fp.p_pow(N)), kPrec));
      CHECK(max_abs_diff(conjugate_by(quantize_direct(f), g, theta), quantize_direct(translate(f, g))) < 1e-10);
    }
  }
}

TEST_CASE("operator kernels") {
  const FieldParams fp = FieldParams::make(3, 1);
  const OperatorKernel id = OperatorKernel::identity(fp, 2);
  CHECK(id.op_norm() == doctest::Approx(1.0));
  CHECK(id.hs_norm2() == doctest::Approx(3.0));
  CHECK(id.refined(4).hs_norm2() == doctest::Approx(id.hs_norm2()));
  CHECK(id.refined(4).op_norm() == doctest::Approx(1.0));
  const UnitCosetGrid g(fp, 2);
  const ConfigFunction e0 = ConfigFunction::cell_indicator(g, 0);
  const OperatorKernel r = OperatorKernel::rank_one(e0, e0);
  CHECK(r.op_norm() == doctest::Approx(e0.norm2()));
  CHECK(max_abs_diff(compose(r, r), OperatorKernel(fp, 2, r.kernel() * e0.norm2())) < 1e-12);
}
