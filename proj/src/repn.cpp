#include "fuchs/repn.hpp"

#include <algorithm>
#include <cmath>

namespace fuchs {

ThetaParam::ThetaParam(const PAdicScalar& theta) : theta_(theta) {
  if (theta.is_zero() || theta.valuation() != 0) throw ParameterError("theta must be a unit (valuation 0)");
}

ThetaParam ThetaParam::one(int p) { return ThetaParam(PAdicScalar::from_integer(p, 1, max_precision(p))); }

ThetaParam ThetaParam::from_digits(int p, const std::vector<int>& digits) {
  if (digits.empty()) throw ParameterError("theta digit list is empty");
  if (digits.front() % p == 0) throw ParameterError("theta must have valuation 0 (first digit nonzero)");
  std::vector<int> padded(digits);
  if (static_cast<int>(padded.size()) > max_precision(p)) throw ParameterError("too many theta digits");
  padded.resize(static_cast<std::size_t>(max_precision(p)), 0);
  return ThetaParam(PAdicScalar::from_digits(p, 0, padded));
}

std::vector<int> ThetaParam::digits() const {
  std::vector<int> d = theta_.digits();
  while (d.size() > 1 && d.back() == 0) d.pop_back();
  return d;
}

GroupElement::GroupElement(PrincipalUnit u_, PAdicScalar t_) : u(std::move(u_)), t(std::move(t_)) {
  if (t.prime() != u.params().p) throw ParameterError("group element over mixed primes");
}

GroupElement GroupElement::identity(const FieldParams& params, int precision) {
  return GroupElement(PrincipalUnit::one(params, precision), PAdicScalar::zero(params.p));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  return GroupElement(u * other.u, other.u.inverse().value() * t + other.t);
}

GroupElement GroupElement::inverse() const { return GroupElement(u.inverse(), -(u.value() * t)); }

namespace {

// Exponent K with t in p^{-K} O, K >= 0.
int denominator_exponent(const PAdicScalar& t) {
  if (t.is_zero() || t.valuation() >= 0) return 0;
  return -t.valuation();
}

struct PiData {
  int scale;
  int k;                  // phase denominator exponent
  std::uint64_t u;        // u mod p^scale
  std::uint64_t u_inv;    // u^{-1} mod p^scale
  std::uint64_t coeff;    // theta u t p^k mod p^k
};

PiData prepare(const GroupElement& g, const ThetaParam& theta, int scale) {
  const FieldParams& fp = g.params();
  PiData d{};
  d.scale = scale;
  d.k = denominator_exponent(g.t);
  if (d.k > scale) throw ParameterError("grid scale too coarse for the translation part of g");
  ResidueRing ring(fp.p, scale);
  d.u = g.u.residue(scale);
  d.u_inv = ring.inv(d.u);
  ResidueRing rk(fp.p, d.k);
  d.coeff = rk.mul(theta.residue(d.k), rk.mul(rk.reduce_u(d.u), g.t.scaled_residue(d.k, d.k)));
  return d;
}

}  // namespace

int pi_output_scale(const GroupElement& g, int m) { return std::max(m, denominator_exponent(g.t)); }

ConfigFunction pi_apply(const GroupElement& g, const ConfigFunction& phi, const ThetaParam& theta) {
  const FieldParams& fp = phi.grid().params();
  const int scale = pi_output_scale(g, phi.scale());
  const PiData d = prepare(g, theta, scale);
  UnitCosetGrid out(fp, scale);
  ResidueRing ring(fp.p, scale), rk(fp.p, d.k);
  RootTable roots(fp.p, d.k);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t u0 = out.rep(i);
    const cplx phase = roots(rk.mul(d.coeff, rk.reduce_u(ring.inv(u0))));
    v(static_cast<Eigen::Index>(i)) = phase * phi.at(ring.mul(d.u_inv, u0));
  }
  return ConfigFunction(out, v);
}

Eigen::MatrixXcd pi_matrix(const GroupElement& g, const ThetaParam& theta, int scale) {
  const FieldParams& fp = g.params();
  const PiData d = prepare(g, theta, scale);
  UnitCosetGrid grid(fp, scale);
  ResidueRing ring(fp.p, scale), rk(fp.p, d.k);
  RootTable roots(fp.p, d.k);
  const auto size = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(size, size);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t u0 = grid.rep(i);
    const std::size_t j = grid.index_of(ring.mul(d.u_inv, u0));
    P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        roots(rk.mul(d.coeff, rk.reduce_u(ring.inv(u0))));
  }
  return P;
}

cplx matrix_coefficient(const ConfigFunction& phi1, const ConfigFunction& phi2, const GroupElement& g,
                        const ThetaParam& theta) {
  return inner(phi1, pi_apply(g, phi2, theta));
}

int coefficient_support_bound(const ConfigFunction& phi1, const ConfigFunction& phi2) {
  return std::max(phi1.scale(), phi2.scale());
}

namespace {

// Visits a cell decomposition of U_n x p^{-T}O: u over U_{max(m,T)} cells, t over
// p^{-T}O / O; the matrix coefficients of scale-m vectors are constant on each cell.
template <class Visit>
void for_each_group_cell(const FieldParams& fp, int m, int truncation, Visit&& visit) {
  const int scale = std::max(m, truncation);
  UnitCosetGrid grid(fp, scale);
  const int prec = max_precision(fp.p);
  const double weight = grid.cell_volume();  // t-cells have volume 1
  const std::uint64_t count = fp.p_pow(truncation);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PrincipalUnit u = grid.unit(i, prec);
    for (std::uint64_t c = 0; c < count; ++c) {
      PAdicScalar t = c == 0 ? PAdicScalar::zero(fp.p)
                             : PAdicScalar::from_rational(fp.p, static_cast<std::int64_t>(c),
                                                          static_cast<std::int64_t>(count), prec);
      visit(GroupElement(u, t), weight);
    }
  }
}

}  // namespace

double orthogonality_integral(const ConfigFunction& phi1, const ConfigFunction& phi2,
                              const ThetaParam& theta, int truncation) {
  const int bound = coefficient_support_bound(phi1, phi2);
  if (truncation < bound)
    throw ParameterError("t-truncation " + std::to_string(truncation) + " is below the support bound " +
                         std::to_string(bound));
  double total = 0.0;
  for_each_group_cell(phi1.grid().params(), bound, truncation, [&](const GroupElement& g, double w) {
    total += std::norm(matrix_coefficient(phi1, phi2, g, theta)) * w;
  });
  return total;
}

cplx coherent_resolve(const ConfigFunction& phi1, const ConfigFunction& phi2, const ConfigFunction& mother,
                      const ThetaParam& theta, int truncation) {
  const double norm2 = mother.norm2();
  if (norm2 == 0.0) throw DomainError("coherent_resolve: mother vector is zero");
  const int bound = std::max(coefficient_support_bound(phi1, mother), coefficient_support_bound(mother, phi2));
  if (truncation < bound) throw ParameterError("t-truncation is below the support bound");
  cplx total = 0.0;
  for_each_group_cell(mother.grid().params(), bound, truncation, [&](const GroupElement& g, double w) {
    const ConfigFunction v = pi_apply(g, mother, theta);
    total += inner(phi1, v) * inner(v, phi2) * w;
  });
  return total / norm2;  // |theta| = 1
}

GnFunction projector_p_theta(const GnFunction& f, const ThetaParam& theta) {
  const KGrid& tg = f.t_grid;
  const int n = f.u_grid.params().n;
  if (tg.b < 0) throw ParameterError("t-resolution too coarse: invariance scale must be within O");
  if (-tg.a < n) throw ParameterError("t-support too small to resolve theta U_n on the dual side");
  if (static_cast<std::size_t>(f.values.cols()) != tg.size() ||
      static_cast<std::size_t>(f.values.rows()) != f.u_grid.size())
    throw ParameterError("G_n function shape mismatch");

  // Dual points s_d = p^{-b} d; s in theta + p^n O iff p^b | d and d / p^b = theta mod p^n.
  const std::uint64_t pb = ipow(static_cast<std::uint64_t>(tg.p), tg.b);
  const std::uint64_t pn = ipow(static_cast<std::uint64_t>(tg.p), n);
  const std::uint64_t th = theta.residue(n);
  GnFunction out{f.u_grid, tg, Eigen::MatrixXcd::Zero(f.values.rows(), f.values.cols())};
  for (Eigen::Index r = 0; r < f.values.rows(); ++r) {
    KFunction hat = fourier_k(KFunction{tg, f.values.row(r).transpose()});
    for (std::size_t d = 0; d < tg.size(); ++d) {
      const bool inside = d % pb == 0 && (d / pb) % pn == th;
      if (!inside) hat.values(static_cast<Eigen::Index>(d)) = 0.0;
    }
    out.values.row(r) = inverse_fourier_k(hat).values.transpose();
  }
  return out;
}

}  // namespace fuchs
