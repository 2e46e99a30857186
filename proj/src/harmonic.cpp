#include "fuchs/harmonic.hpp"

#include <cmath>

namespace fuchs {

UnitCosetGrid::UnitCosetGrid(const FieldParams& params, int scale) : params_(params), scale_(scale) {
  if (scale < params.n) throw ParameterError("u-scale m must be >= n");
  if (scale > max_precision(params.p)) throw ParameterError("u-scale exceeds the working precision");
  size_ = static_cast<std::size_t>(params.p_pow(scale - params.n));
  modulus_ = params.p_pow(scale);
  step_ = params.p_pow(params.n);
  cell_volume_ = params.q_pow(-scale);
}

std::size_t UnitCosetGrid::index_of(std::uint64_t residue) const {
  const std::uint64_t r = residue % modulus_;
  if (r % step_ != 1 % step_) throw DomainError("residue is not in U_n");
  return static_cast<std::size_t>(((r + modulus_ - 1) % modulus_) / step_);
}

std::size_t UnitCosetGrid::parent(std::size_t i, int coarse_scale) const {
  if (coarse_scale > scale_) throw ParameterError("parent scale is finer than the grid");
  return i % static_cast<std::size_t>(params_.p_pow(coarse_scale - params_.n));
}

PrincipalUnit UnitCosetGrid::unit(std::size_t i, int precision) const {
  return PrincipalUnit::from_residue(params_, rep(i), precision);
}

GammaGrid::GammaGrid(const FieldParams& params, int cutoff) : params_(params), cutoff_(cutoff) {
  if (cutoff < params.n) throw ParameterError("t-cutoff N must be >= n");
  if (cutoff > max_precision(params.p)) throw ParameterError("t-cutoff exceeds the working precision");
  size_ = static_cast<std::size_t>(params.p_pow(cutoff - params.n));
}

PAdicScalar GammaGrid::rep(std::size_t b, int precision) const {
  if (b == 0) return PAdicScalar::zero(params_.p);
  return PAdicScalar::from_rational(params_.p, static_cast<std::int64_t>(b),
                                    static_cast<std::int64_t>(params_.p_pow(cutoff_)), precision);
}

std::size_t GammaGrid::index_of(const PAdicScalar& t) const {
  if (t.is_zero() || t.valuation() >= -params_.n) return 0;
  if (t.valuation() < -cutoff_) return size_;
  return static_cast<std::size_t>(t.scaled_residue(cutoff_, cutoff_ - params_.n));
}

std::size_t GammaGrid::dilate(std::size_t b, std::uint64_t unit_residue) const {
  ResidueRing ring(params_.p, cutoff_ - params_.n);
  return static_cast<std::size_t>(ring.mul(ring.reduce_u(unit_residue), b));
}

DualGrid::DualGrid(const FieldParams& params, int cutoff) : params_(params), cutoff_(cutoff) {
  size_ = static_cast<std::size_t>(params.p_pow(cutoff - params.n));
  weight_ = params.q_pow(params.n - cutoff);
}

KGrid::KGrid(int p_, int a_, int b_) : p(p_), a(a_), b(b_) {
  if (a > b) throw ParameterError("k-grid needs support exponent <= invariance exponent");
  if (b - a > max_precision(p)) throw ParameterError("k-grid too large");
}

double KGrid::cell_volume() const { return std::pow(static_cast<double>(p), -b); }

PAdicScalar KGrid::point(std::size_t c, int precision) const {
  if (c == 0) return PAdicScalar::zero(p);
  return PAdicScalar(p, a, static_cast<std::uint64_t>(c), precision);
}

std::size_t KGrid::index_of(const PAdicScalar& t) const {
  if (t.is_zero() || t.valuation() >= b) return 0;
  if (t.valuation() < a) return size();
  return static_cast<std::size_t>(t.scaled_residue(-a, b - a));
}

ConfigFunction::ConfigFunction(UnitCosetGrid grid, Eigen::VectorXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size())
    throw ParameterError("config function length does not match its grid");
}

ConfigFunction ConfigFunction::zeros(const UnitCosetGrid& grid) {
  return ConfigFunction(grid, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size())));
}

ConfigFunction ConfigFunction::constant(const UnitCosetGrid& grid, cplx value) {
  return ConfigFunction(grid, Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

ConfigFunction ConfigFunction::cell_indicator(const UnitCosetGrid& grid, std::size_t i) {
  ConfigFunction f = zeros(grid);
  f.values_(static_cast<Eigen::Index>(i)) = 1.0;
  return f;
}

ConfigFunction ConfigFunction::refined(int scale) const {
  if (scale == grid_.scale()) return *this;
  UnitCosetGrid fine(grid_.params(), scale);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(fine.size()));
  for (std::size_t i = 0; i < fine.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = values_(static_cast<Eigen::Index>(fine.parent(i, grid_.scale())));
  return ConfigFunction(fine, v);
}

cplx inner(const ConfigFunction& a, const ConfigFunction& b) {
  if (!(a.grid().params() == b.grid().params())) throw ParameterError("inner product across fields");
  const int m = std::max(a.scale(), b.scale());
  const ConfigFunction ra = a.refined(m), rb = b.refined(m);
  return ra.values().dot(rb.values()) * ra.grid().cell_volume();
}

namespace {

KFunction transform_k(const KFunction& f, bool inverse) {
  const KGrid& g = f.grid;
  KGrid out_grid(g.p, -g.b, -g.a);
  const int k = g.b - g.a;
  RootTable roots(g.p, k);
  ResidueRing ring(g.p, k);
  const std::size_t size = g.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  // s_d t_c = p^{a-b} c d, so the phase is c d / p^{b-a}.
  for (std::size_t d = 0; d < size; ++d) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < size; ++c) {
      std::uint64_t j = ring.mul(c, d);
      if (inverse) j = ring.neg(j);
      acc += f.values(static_cast<Eigen::Index>(c)) * roots(j);
    }
    out(static_cast<Eigen::Index>(d)) = acc * g.cell_volume();
  }
  return KFunction{out_grid, out};
}

Eigen::VectorXcd transform_gamma(const GammaGrid& grid, const Eigen::VectorXcd& f, bool inverse) {
  if (static_cast<std::size_t>(f.size()) != grid.size())
    throw ParameterError("gamma-grid function has the wrong length");
  const FieldParams& fp = grid.params();
  const int k = grid.cutoff() - fp.n;
  RootTable roots(fp.p, k);
  ResidueRing ring(fp.p, k);
  const std::size_t size = grid.size();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(size));
  // z_c t_b = p^n c b / p^N, so the phase is c b / p^{N-n}.
  for (std::size_t c = 0; c < size; ++c) {
    cplx acc = 0.0;
    for (std::size_t b = 0; b < size; ++b) {
      std::uint64_t j = ring.mul(c, b);
      if (inverse) j = ring.neg(j);
      acc += f(static_cast<Eigen::Index>(b)) * roots(j);
    }
    out(static_cast<Eigen::Index>(c)) = acc;
  }
  if (inverse) out *= DualGrid(fp, grid.cutoff()).weight();
  return out;
}

}  // namespace

KFunction fourier_k(const KFunction& f) { return transform_k(f, false); }
KFunction inverse_fourier_k(const KFunction& f) { return transform_k(f, true); }

Eigen::VectorXcd fourier_gamma(const GammaGrid& grid, const Eigen::VectorXcd& f) {
  return transform_gamma(grid, f, false);
}

Eigen::VectorXcd inverse_fourier_gamma(const GammaGrid& grid, const Eigen::VectorXcd& fhat) {
  return transform_gamma(grid, fhat, true);
}

IdentityCheck square_substitution(const ConfigFunction& f) {
  const UnitCosetGrid& g = f.grid();
  const ResidueRing ring = g.ring();
  cplx lhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint64_t u = g.rep(i);
    lhs += f.at(ring.mul(u, u));
  }
  return {lhs * g.cell_volume(), f.values().sum() * g.cell_volume()};
}

IdentityCheck phi_substitution(const FieldParams& params, int scale, const Eigen::VectorXcd& h) {
  UnitCosetGrid g(params, scale);
  if (static_cast<std::size_t>(h.size()) != g.size())
    throw ParameterError("h must live on p^n O / p^m O");
  const ResidueRing ring = g.ring();
  const std::uint64_t step = params.p_pow(params.n);
  cplx lhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint64_t x = ring.phi(g.rep(i));
    lhs += h(static_cast<Eigen::Index>(x / step));
  }
  return {lhs * g.cell_volume(), h.sum() * g.cell_volume()};
}

}  // namespace fuchs
