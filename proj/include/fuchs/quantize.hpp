#pragma once

// Covariant quantization on X_n = U_n x Gamma_n.
//
// Symbols live on (U_n / U_m) x (p^{-N}O / p^{-n}O). Operators are stored by their
// Schwartz kernels on (U_n / U_M)^2, acting as (A phi)(u0) = integral K(u0, v) phi(v) dv.

#include <Eigen/Dense>
#include <utility>

#include "fuchs/harmonic.hpp"
#include "fuchs/repn.hpp"

namespace fuchs {

class Symbol {
 public:
  Symbol(const FieldParams& params, const ThetaParam& theta, int m, int N, Eigen::MatrixXcd values);

  static Symbol zeros(const FieldParams& params, const ThetaParam& theta, int m, int N);
  static Symbol constant(const FieldParams& params, const ThetaParam& theta, int m, int N, cplx value);

  const FieldParams& params() const { return params_; }
  const ThetaParam& theta() const { return theta_; }
  int m() const { return m_; }
  int N() const { return N_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }
  UnitCosetGrid u_grid() const { return UnitCosetGrid(params_, m_); }
  GammaGrid t_grid() const { return GammaGrid(params_, N_); }

  // Haar on U_n times counting measure on Gamma_n.
  double l2_norm2() const { return values_.squaredNorm() * params_.q_pow(-m_); }
  cplx integral() const { return values_.sum() * params_.q_pow(-m_); }
  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  // Same function on a finer grid (m2 >= m, N2 >= N).
  Symbol refined(int m2, int N2) const;
  Symbol conjugate() const { return Symbol(params_, theta_, m_, N_, values_.conjugate()); }
  Symbol with_values(Eigen::MatrixXcd values) const { return Symbol(params_, theta_, m_, N_, std::move(values)); }

 private:
  FieldParams params_;
  ThetaParam theta_;
  int m_;
  int N_;
  Eigen::MatrixXcd values_;
};

// Largest entry difference after refining both symbols to a common grid.
double max_abs_diff(const Symbol& a, const Symbol& b);

class OperatorKernel {
 public:
  OperatorKernel(const FieldParams& params, int M, Eigen::MatrixXcd kernel);

  static OperatorKernel identity(const FieldParams& params, int M);
  // |ket><bra| : phi -> <bra, phi> ket.
  static OperatorKernel rank_one(const ConfigFunction& ket, const ConfigFunction& bra);

  const FieldParams& params() const { return params_; }
  int scale() const { return M_; }
  const Eigen::MatrixXcd& kernel() const { return kernel_; }
  UnitCosetGrid grid() const { return UnitCosetGrid(params_, M_); }

  // Matrix acting on cell values: kernel * p^{-M}.
  Eigen::MatrixXcd action() const { return kernel_ * params_.q_pow(-M_); }
  double hs_norm2() const { return kernel_.squaredNorm() * params_.q_pow(-2.0 * M_); }
  double op_norm() const;
  OperatorKernel adjoint() const { return OperatorKernel(params_, M_, kernel_.adjoint()); }
  OperatorKernel refined(int M2) const;
  ConfigFunction apply(const ConfigFunction& phi) const;

 private:
  FieldParams params_;
  int M_;
  Eigen::MatrixXcd kernel_;
};

OperatorKernel compose(const OperatorKernel& a, const OperatorKernel& b);
double max_abs_diff(const OperatorKernel& a, const OperatorKernel& b);

// Omega([g]) phi (u0) = Psi(theta phi(u u0^{-1}) t) phi(u^2 u0^{-1}).
ConfigFunction omega_point(const GroupElement& g, const ConfigFunction& phi, const ThetaParam& theta);

// Kernel scale of Omega(f): max(m, N).
int kernel_scale(const Symbol& f);

// q^n integral f([g]) Omega([g]) d[g], assembled point operator by point operator.
OperatorKernel quantize_direct(const Symbol& f);
// Kernel through F_Gamma in the t-slot and the substitution (u0, v) -> ((v u0)^{1/2}, theta phi((v/u0)^{1/2})).
OperatorKernel kernel_formula(const Symbol& f);

// W(u,[t]) = <phi1, Omega(u,[t]) phi2> at resolution (m, m).
Symbol wigner(const ConfigFunction& phi1, const ConfigFunction& phi2, const ThetaParam& theta);

// Inverse of the quantization; output resolution (M, M).
Symbol symbol_of_operator(const OperatorKernel& a, const ThetaParam& theta);

// (||Omega(f)||_HS^2, q^n ||f||^2).
std::pair<double, double> hs_isometry_check(const Symbol& f);

// Output resolution of translate(f, g).
std::pair<int, int> translate_resolution(const Symbol& f, const GroupElement& g);
// f^g([g']) = f([g^{-1} g']), the left action of G_n (or X_n) on symbols.
Symbol translate(const Symbol& f, const GroupElement& g);

// pi(g) A pi(g)^*, on the grid where both A and pi(g) are exact.
OperatorKernel conjugate_by(const OperatorKernel& a, const GroupElement& g, const ThetaParam& theta);

}  // namespace fuchs
