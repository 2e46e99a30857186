#pragma once

// The representation pi_theta of G_n = U_n x k on L^2(U_n):
//   (pi(u,t) phi)(u0) = Psi(theta u0^{-1} u t) phi(u^{-1} u0).

#include <Eigen/Dense>
#include <vector>

#include "fuchs/harmonic.hpp"
#include "fuchs/padic.hpp"

namespace fuchs {

class ThetaParam {
 public:
  // theta must have valuation 0.
  explicit ThetaParam(const PAdicScalar& theta);

  static ThetaParam one(int p);
  // Little-endian digits of an integer unit, treated as exact.
  static ThetaParam from_digits(int p, const std::vector<int>& digits);

  const PAdicScalar& value() const { return theta_; }
  int prime() const { return theta_.prime(); }
  std::uint64_t residue(int k) const { return theta_.residue(k); }
  std::vector<int> digits() const;
  ThetaParam negated() const { return ThetaParam(-theta_); }

  friend bool operator==(const ThetaParam& a, const ThetaParam& b) { return a.theta_ == b.theta_; }

 private:
  PAdicScalar theta_;
};

// (u, t) with (u,t)(u',t') = (uu', u'^{-1} t + t'). Also used for points (u,[t]) of X_n.
struct GroupElement {
  PrincipalUnit u;
  PAdicScalar t;

  GroupElement(PrincipalUnit u_, PAdicScalar t_);
  static GroupElement identity(const FieldParams& params, int precision);

  const FieldParams& params() const { return u.params(); }
  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
};

// Scale at which pi(g) phi is again locally constant: max(m, -val t).
int pi_output_scale(const GroupElement& g, int m);

ConfigFunction pi_apply(const GroupElement& g, const ConfigFunction& phi, const ThetaParam& theta);

// Unitary matrix of pi(g) on cell values at scale M (requires M >= -val t).
Eigen::MatrixXcd pi_matrix(const GroupElement& g, const ThetaParam& theta, int scale);

cplx matrix_coefficient(const ConfigFunction& phi1, const ConfigFunction& phi2, const GroupElement& g,
                        const ThetaParam& theta);

// Radius exponent of the t-support of t -> <phi1, pi(u,t) phi2>: zero outside p^{-bound} O.
int coefficient_support_bound(const ConfigFunction& phi1, const ConfigFunction& phi2);

// integral over G_n of |<phi1, pi(g) phi2>|^2, summing t over p^{-T} O / O.
double orthogonality_integral(const ConfigFunction& phi1, const ConfigFunction& phi2,
                              const ThetaParam& theta, int truncation);

// (1 / ||phi||^2) integral <phi1, pi(g) phi><pi(g) phi, phi2> dg.
cplx coherent_resolve(const ConfigFunction& phi1, const ConfigFunction& phi2, const ConfigFunction& mother,
                      const ThetaParam& theta, int truncation);

// Function on U_n x k: rows are U_m cells, columns a KGrid in t.
struct GnFunction {
  UnitCosetGrid u_grid;
  KGrid t_grid;
  Eigen::MatrixXcd values;

  double norm2() const { return values.squaredNorm() * u_grid.cell_volume() * t_grid.cell_volume(); }
};

// Id (x) F^{-1} 1_{theta U_n} F. Needs t-support at least p^{-n} O and invariance scale <= O.
GnFunction projector_p_theta(const GnFunction& f, const ThetaParam& theta);

}  // namespace fuchs
