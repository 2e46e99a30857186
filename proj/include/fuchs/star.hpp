#pragma once

#include <utility>

#include "fuchs/quantize.hpp"

namespace fuchs {

// Both symbols refined to (max m, max N); throws on theta mismatch.
std::pair<Symbol, Symbol> reconcile(const Symbol& f1, const Symbol& f2);

// Omega^{-1}(Omega(f1) Omega(f2)) at resolution (M, M), M = max(m, N).
Symbol star_via_operators(const Symbol& f1, const Symbol& f2);

// Same product through the three-point kernel, summed over the exact grid.
Symbol star_via_kernel(const Symbol& f1, const Symbol& f2);

// Exact phase of K3([g1],[g2],[g3]) / q^{2n}:
//   theta (phi(u1/u2) t3 + phi(u2/u3) t1 + phi(u3/u1) t2) mod O.
CharacterAngle three_point_angle(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2,
                                 const GroupElement& g3);
cplx three_point_kernel(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2,
                        const GroupElement& g3);
// K([g1],[g2]) = K3([e],[g1],[g2]) = q^{2n} Psi(theta (phi(u2) t1 - phi(u1) t2)).
cplx two_point_kernel(const ThetaParam& theta, const GroupElement& g1, const GroupElement& g2);

// (integral f1 * f2, integral f1 f2) over X_n.
IdentityCheck traciality_check(const Symbol& f1, const Symbol& f2);

// max |lambda_g(f1 * f2) - lambda_g f1 * lambda_g f2|.
double covariance_check(const Symbol& f1, const Symbol& f2, const GroupElement& g);

// q^{2n} Vol(supp f1) Vol(supp f2) ||f1||_inf ||f2||_inf.
double star_sup_bound(const Symbol& f1, const Symbol& f2);

}  // namespace fuchs
