#include "fuchs/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "fuchs/parallel.hpp"

namespace fuchs {

namespace {

int denominator_exponent(const PAdicScalar& t) {
  if (t.is_zero() || t.valuation() >= 0) return 0;
  return -t.valuation();
}

}  // namespace

// ---------------------------------------------------------------- Symbol

Symbol::Symbol(const FieldParams& params, const ThetaParam& theta, int m, int N, Eigen::MatrixXcd values)
    : params_(params), theta_(theta), m_(m), N_(N), values_(std::move(values)) {
  if (theta.prime() != params.p) throw ParameterError("theta over a different prime");
  if (m < params.n || N < params.n) throw ParameterError("symbol resolution needs m >= n and N >= n");
  if (static_cast<std::uint64_t>(values_.rows()) != params.p_pow(m - params.n) ||
      static_cast<std::uint64_t>(values_.cols()) != params.p_pow(N - params.n))
    throw ParameterError("symbol array shape does not match its resolution");
}

Symbol Symbol::zeros(const FieldParams& params, const ThetaParam& theta, int m, int N) {
  return constant(params, theta, m, N, 0.0);
}

Symbol Symbol::constant(const FieldParams& params, const ThetaParam& theta, int m, int N, cplx value) {
  const auto rows = static_cast<Eigen::Index>(params.p_pow(m - params.n));
  const auto cols = static_cast<Eigen::Index>(params.p_pow(N - params.n));
  return Symbol(params, theta, m, N, Eigen::MatrixXcd::Constant(rows, cols, value));
}

Symbol Symbol::refined(int m2, int N2) const {
  if (m2 < m_ || N2 < N_) throw ParameterError("refinement must not coarsen");
  if (m2 == m_ && N2 == N_) return *this;
  Symbol out = zeros(params_, theta_, m2, N2);
  UnitCosetGrid fine(params_, m2);
  const std::uint64_t spread = params_.p_pow(N2 - N_);
  for (Eigen::Index a = 0; a < out.values_.rows(); ++a) {
    const auto pa = static_cast<Eigen::Index>(fine.parent(static_cast<std::size_t>(a), m_));
    for (Eigen::Index b = 0; b < values_.cols(); ++b)
      out.values_(a, b * static_cast<Eigen::Index>(spread)) = values_(pa, b);
  }
  return out;
}

double max_abs_diff(const Symbol& a, const Symbol& b) {
  const int m = std::max(a.m(), b.m()), N = std::max(a.N(), b.N());
  const Symbol ra = a.refined(m, N), rb = b.refined(m, N);
  return (ra.values() - rb.values()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- OperatorKernel

OperatorKernel::OperatorKernel(const FieldParams& params, int M, Eigen::MatrixXcd kernel)
    : params_(params), M_(M), kernel_(std::move(kernel)) {
  const auto size = static_cast<Eigen::Index>(params.p_pow(M - params.n));
  if (M < params.n || kernel_.rows() != size || kernel_.cols() != size)
    throw ParameterError("kernel matrix shape does not match its scale");
}

OperatorKernel OperatorKernel::identity(const FieldParams& params, int M) {
  const auto size = static_cast<Eigen::Index>(params.p_pow(M - params.n));
  return OperatorKernel(params, M, Eigen::MatrixXcd::Identity(size, size) * params.q_pow(M));
}

OperatorKernel OperatorKernel::rank_one(const ConfigFunction& ket, const ConfigFunction& bra) {
  const int M = std::max(ket.scale(), bra.scale());
  const ConfigFunction k = ket.refined(M), b = bra.refined(M);
  return OperatorKernel(k.grid().params(), M, k.values() * b.values().adjoint());
}

double OperatorKernel::op_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(action());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

OperatorKernel OperatorKernel::refined(int M2) const {
  if (M2 < M_) throw ParameterError("refinement must not coarsen");
  if (M2 == M_) return *this;
  UnitCosetGrid fine(params_, M2);
  const auto size = static_cast<Eigen::Index>(fine.size());
  Eigen::MatrixXcd k(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const auto pi = static_cast<Eigen::Index>(fine.parent(static_cast<std::size_t>(i), M_));
    for (Eigen::Index j = 0; j < size; ++j)
      k(i, j) = kernel_(pi, static_cast<Eigen::Index>(fine.parent(static_cast<std::size_t>(j), M_)));
  }
  return OperatorKernel(params_, M2, k);
}

ConfigFunction OperatorKernel::apply(const ConfigFunction& phi) const {
  const int M = std::max(M_, phi.scale());
  const OperatorKernel a = refined(M);
  const ConfigFunction f = phi.refined(M);
  return ConfigFunction(f.grid(), a.action() * f.values());
}

OperatorKernel compose(const OperatorKernel& a, const OperatorKernel& b) {
  const int M = std::max(a.scale(), b.scale());
  const OperatorKernel ra = a.refined(M), rb = b.refined(M);
  return OperatorKernel(a.params(), M, ra.kernel() * rb.kernel() * a.params().q_pow(-M));
}

double max_abs_diff(const OperatorKernel& a, const OperatorKernel& b) {
  const int M = std::max(a.scale(), b.scale());
  return (a.refined(M).kernel() - b.refined(M).kernel()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- point operators

ConfigFunction omega_point(const GroupElement& g, const ConfigFunction& phi, const ThetaParam& theta) {
  const FieldParams& fp = phi.grid().params();
  const int k = denominator_exponent(g.t);
  const int scale = std::max(phi.scale(), k);
  UnitCosetGrid out(fp, scale);
  ResidueRing ring(fp.p, scale), rk(fp.p, k);
  RootTable roots(fp.p, k);
  const std::uint64_t u = g.u.residue(scale);
  const std::uint64_t u2 = ring.mul(u, u);
  const std::uint64_t coeff = rk.mul(theta.residue(k), g.t.scaled_residue(k, k));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t u0_inv = ring.inv(out.rep(i));
    const std::uint64_t x = ring.phi(ring.mul(u, u0_inv));
    v(static_cast<Eigen::Index>(i)) = roots(rk.mul(coeff, rk.reduce_u(x))) * phi.at(ring.mul(u2, u0_inv));
  }
  return ConfigFunction(out, v);
}

int kernel_scale(const Symbol& f) { return std::max(f.m(), f.N()); }

OperatorKernel quantize_direct(const Symbol& f) {
  const FieldParams& fp = f.params();
  const int M = kernel_scale(f), N = f.N();
  UnitCosetGrid grid(fp, M);
  ResidueRing ring(fp.p, M), rn(fp.p, N);
  RootTable roots(fp.p, N);
  const std::uint64_t theta = f.theta().residue(N);
  const auto size = static_cast<Eigen::Index>(grid.size());
  const std::size_t tcount = static_cast<std::size_t>(f.values().cols());
  // Omega(u,[t]) on scale-M cells is a phased permutation u0 -> u^2 u0^{-1}; its kernel
  // is p^M on the graph, which cancels the cell volume p^{-M} of u.
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(size, size);
  std::vector<Eigen::MatrixXcd> partial(grid.size());
  parallel_for(grid.size(), [&](std::size_t a) {
    Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(size, size);
    const std::uint64_t u = grid.rep(a);
    const std::uint64_t u2 = ring.mul(u, u);
    const auto fa = static_cast<Eigen::Index>(grid.parent(a, f.m()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::uint64_t u0_inv = ring.inv(grid.rep(i));
      const auto j = static_cast<Eigen::Index>(grid.index_of(ring.mul(u2, u0_inv)));
      const std::uint64_t x = rn.mul(theta, rn.reduce_u(ring.phi(ring.mul(u, u0_inv))));
      cplx acc = 0.0;
      for (std::size_t b = 0; b < tcount; ++b)
        acc += f.values()(fa, static_cast<Eigen::Index>(b)) * roots(rn.mul(x, b));
      local(static_cast<Eigen::Index>(i), j) += acc;
    }
    partial[a] = std::move(local);
  });
  for (const auto& P : partial) K += P;
  return OperatorKernel(fp, M, K * fp.q_pow(fp.n));
}

OperatorKernel kernel_formula(const Symbol& f) {
  const FieldParams& fp = f.params();
  const int M = kernel_scale(f), N = f.N();
  UnitCosetGrid grid(fp, M), ugrid = f.u_grid();
  GammaGrid tgrid = f.t_grid();
  ResidueRing ring(fp.p, M);
  const std::uint64_t theta = f.theta().residue(M);
  const std::uint64_t pn = fp.p_pow(fp.n), pN = fp.p_pow(N);

  // (Id x F_Gamma) f on (U_n / U_m) x (p^n O / p^N O).
  Eigen::MatrixXcd fhat(f.values().rows(), f.values().cols());
  for (Eigen::Index a = 0; a < f.values().rows(); ++a)
    fhat.row(a) = fourier_gamma(tgrid, f.values().row(a).transpose()).transpose();

  const auto size = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd K(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const std::uint64_t u0 = grid.rep(static_cast<std::size_t>(i));
    const std::uint64_t u0_inv = ring.inv(u0);
    for (Eigen::Index j = 0; j < size; ++j) {
      const std::uint64_t v = grid.rep(static_cast<std::size_t>(j));
      const std::uint64_t w = ring.sqrt_unit(ring.mul(v, u0), fp.n);
      const std::uint64_t r = ring.sqrt_unit(ring.mul(v, u0_inv), fp.n);
      const std::uint64_t z = ring.mul(theta, ring.phi(r)) % pN;
      K(i, j) = fhat(static_cast<Eigen::Index>(ugrid.index_of(w)), static_cast<Eigen::Index>(z / pn));
    }
  }
  return OperatorKernel(fp, M, K * fp.q_pow(fp.n));
}

Symbol wigner(const ConfigFunction& phi1, const ConfigFunction& phi2, const ThetaParam& theta) {
  const FieldParams& fp = phi1.grid().params();
  const int m = std::max(phi1.scale(), phi2.scale());
  const ConfigFunction f1 = phi1.refined(m), f2 = phi2.refined(m);
  UnitCosetGrid grid(fp, m);
  ResidueRing ring(fp.p, m);
  RootTable roots(fp.p, m);
  const std::uint64_t th = theta.residue(m);
  Symbol W = Symbol::zeros(fp, theta, m, m);
  const auto tcount = W.values().cols();
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const std::uint64_t u = grid.rep(a);
    const std::uint64_t u2 = ring.mul(u, u);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::uint64_t u0_inv = ring.inv(grid.rep(i));
      const cplx amp = std::conj(f1.values()(static_cast<Eigen::Index>(i))) * f2.at(ring.mul(u2, u0_inv));
      if (amp == 0.0) continue;
      const std::uint64_t x = ring.mul(th, ring.phi(ring.mul(u, u0_inv)));
      for (Eigen::Index b = 0; b < tcount; ++b)
        W.values()(static_cast<Eigen::Index>(a), b) += amp * roots(ring.mul(x, static_cast<std::uint64_t>(b)));
    }
  }
  W.values() *= grid.cell_volume();
  return W;
}

Symbol symbol_of_operator(const OperatorKernel& a, const ThetaParam& theta) {
  const FieldParams& fp = a.params();
  const int M = a.scale();
  UnitCosetGrid grid(fp, M);
  GammaGrid tgrid(fp, M);
  DualGrid dual(fp, M);
  ResidueRing ring(fp.p, M);
  const std::uint64_t theta_inv = ring.inv(theta.residue(M));
  const auto size = static_cast<Eigen::Index>(grid.size());

  // G(w, z) = q^{-n} K(w r^{-1}, w r) with r = phi^{-1}(z / theta); then invert F_Gamma.
  Eigen::MatrixXcd G(size, static_cast<Eigen::Index>(dual.size()));
  for (Eigen::Index wi = 0; wi < size; ++wi) {
    const std::uint64_t w = grid.rep(static_cast<std::size_t>(wi));
    for (std::size_t c = 0; c < dual.size(); ++c) {
      const std::uint64_t r = ring.phi_inverse(ring.mul(theta_inv, dual.point(c)), fp.n);
      const auto i = static_cast<Eigen::Index>(grid.index_of(ring.mul(w, ring.inv(r))));
      const auto j = static_cast<Eigen::Index>(grid.index_of(ring.mul(w, r)));
      G(wi, static_cast<Eigen::Index>(c)) = a.kernel()(i, j);
    }
  }
  G *= fp.q_pow(-fp.n);
  Symbol out = Symbol::zeros(fp, theta, M, M);
  for (Eigen::Index wi = 0; wi < size; ++wi)
    out.values().row(wi) = inverse_fourier_gamma(tgrid, G.row(wi).transpose()).transpose();
  return out;
}

std::pair<double, double> hs_isometry_check(const Symbol& f) {
  return {quantize_direct(f).hs_norm2(), f.params().q_pow(f.params().n) * f.l2_norm2()};
}

// ---------------------------------------------------------------- covariance

std::pair<int, int> translate_resolution(const Symbol& f, const GroupElement& g) {
  const int n = f.params().n;
  if (g.t.is_zero() || g.t.valuation() >= -n) return {f.m(), f.N()};
  const int v = g.t.valuation();
  return {std::max(f.m(), -n - v), std::max(f.N(), -v)};
}

Symbol translate(const Symbol& f, const GroupElement& g) {
  const FieldParams& fp = f.params();
  const auto [m2, N2] = translate_resolution(f, g);
  Symbol out = Symbol::zeros(fp, f.theta(), m2, N2);
  UnitCosetGrid grid(fp, m2), src = f.u_grid();
  ResidueRing ring(fp.p, m2);
  const int k = N2 - fp.n;
  ResidueRing rk(fp.p, k);
  const std::uint64_t u = g.u.residue(std::max(m2, k));
  const std::uint64_t u_inv = ring.inv(u % grid.modulus());
  // t = tau / p^{N2}; only tau mod p^{N2 - n} matters for the class.
  const std::uint64_t tau = g.t.is_zero() || g.t.valuation() >= -fp.n ? 0 : g.t.scaled_residue(N2, k);
  const std::uint64_t spread = fp.p_pow(N2 - f.N());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const std::uint64_t up = grid.rep(a);
    const auto sa = static_cast<Eigen::Index>(src.index_of(ring.mul(u_inv, up)));
    const std::uint64_t shift = rk.mul(rk.mul(rk.reduce_u(u), rk.inv(rk.reduce_u(up))), tau);
    for (Eigen::Index b = 0; b < out.values().cols(); ++b) {
      const std::uint64_t num = rk.sub(static_cast<std::uint64_t>(b), shift);
      if (num % spread != 0) continue;
      out.values()(static_cast<Eigen::Index>(a), b) = f.values()(sa, static_cast<Eigen::Index>(num / spread));
    }
  }
  return out;
}

OperatorKernel conjugate_by(const OperatorKernel& a, const GroupElement& g, const ThetaParam& theta) {
  const int M = std::max(a.scale(), pi_output_scale(g, a.scale()));
  const OperatorKernel ra = a.refined(M);
  const Eigen::MatrixXcd P = pi_matrix(g, theta, M);
  return OperatorKernel(a.params(), M, P * ra.kernel() * P.adjoint());
}

}  // namespace fuchs
