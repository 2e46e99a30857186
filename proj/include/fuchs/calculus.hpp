#pragma once

// Regularity calculus on X_n: the weight mu_0, the kernels kappa_s = F_k(conj(Psi) mu_0^s)
// restricted to U_n, the right convolutions J^s along {(u,[0])}, seminorms, the weights
// omega_s, operator-norm certification and recovery of symbols from coherent coefficients.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fuchs/quantize.hpp"

namespace fuchs {

// ||mu_0^sigma||_{L^1(k)} = q^n [1 + (1 - 1/q) q^{sigma+1} / (1 - q^{sigma+1})], sigma < -1.
double mu0_l1_norm(const FieldParams& params, double sigma);

// Integral of kappa_s over the U_m-coset of the unit with the given residue (mod p^m).
// A finite shell sum, exact for every real s; at s = 0 it is the indicator of the identity cell.
double ks_cell_integral(const FieldParams& params, double s, int scale, std::uint64_t residue);

// kappa_s as a function of v = val(u - 1) on U_n, for s < -1.
class KsKernel {
 public:
  KsKernel(const FieldParams& params, double s, int v_max);

  const FieldParams& params() const { return params_; }
  double s() const { return s_; }
  int v_max() const { return v_max_; }
  // kappa(v) for v = n .. v_max.
  const std::vector<double>& values() const { return values_; }
  // Integral of kappa over U_{v_max + 1}, the cell around u = 1.
  double tail() const { return tail_; }

  // Closed form at any finite v >= n.
  double value(int v) const;
  // kappa(1) = ||mu_0^s||_1.
  double at_identity() const;
  double at(const PrincipalUnit& u) const;

 private:
  FieldParams params_;
  double s_;
  int v_max_;
  std::vector<double> values_;
  double tail_;
};

KsKernel ks_kernel(const FieldParams& params, double s, int v_max = 0);

// Smallest u-scale at which J^s preserves symbols of t-cutoff N: max(m, N + n).
int closure_scale(const FieldParams& params, int m, int N);

enum class JRoute { direct, spectral };

// J^s on the symbol space of resolution (m, N), flat index a * p^{N-n} + b.
class JOperator {
 public:
  JOperator(const FieldParams& params, double s, int m, int N, Eigen::MatrixXd matrix);

  const FieldParams& params() const { return params_; }
  double s() const { return s_; }
  int m() const { return m_; }
  int N() const { return N_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // The symbol must already sit at (m, N).
  Symbol apply(const Symbol& f) const;

 private:
  FieldParams params_;
  double s_;
  int m_;
  int N_;
  Eigen::MatrixXd matrix_;
};

// Throws ParameterError when m < N + n. The spectral route raises J^{-2} to the power -s/2
// and throws std::runtime_error if J^{-2} is not positive definite.
JOperator j_matrix(const FieldParams& params, double s, int m, int N, JRoute route = JRoute::direct);

// Eigenvalues of the directly assembled J^s matrix (symmetric), in no particular order.
Eigen::VectorXd j_spectrum(const FieldParams& params, double s, int m, int N);

// J^s f, refining f to the closure scale first. Output resolution (closure_scale, N).
Symbol apply_j(const Symbol& f, double s);

// I^j f = mu_0([t])^j f.
Symbol apply_i(const Symbol& f, int j);

struct SeminormEntry {
  int k = 0;  // power of J
  int j = 0;  // power of I
  double value = 0.0;
};

struct SeminormReport {
  std::vector<SeminormEntry> entries;
  bool all_finite() const;
};

// ||J^k F||_inf for k = 0 .. j_max.
SeminormReport b_seminorms(const Symbol& f, int j_max);
// ||J^k I^j f||_inf for k = 0 .. k_max, j = 0 .. j_max.
SeminormReport s_seminorms(const Symbol& f, int k_max, int j_max);

struct Inequality {
  double lhs = 0.0;
  double rhs = 0.0;
  // lhs <= rhs up to a relative slack; an infinite rhs always holds.
  bool holds(double slack = 1e-9) const;
};

// ||J^j(F1 F2)||_inf against q^{-2n} ||mu_0^{-2}||_1^2 ||J^{j+2}F1||_inf ||J^{j+2}F2||_inf.
Inequality product_inequality(const Symbol& f1, const Symbol& f2, int j);
// ||J^k I^j(f F)||_inf against q^{-2n} ||mu_0^{-2}||_1^2 ||J^{k+2} I^j f||_inf ||J^{k+2} F||_inf.
Inequality ideal_inequality(const Symbol& f, const Symbol& big_f, int k, int j);

// omega_s(u, t) = mu_0^s(t) + 1[|t| <= q^n].
double omega_weight(const FieldParams& params, double s, const GroupElement& g);
// Same weight from the valuation of t alone (kInfinity for t = 0).
double omega_from_valuation(const FieldParams& params, double s, int val);
// integral over G_n of omega_a(g) omega_b(g^{-1}) dg = q^{-n}(||mu_0^{a+b}||_1 + 3 q^n);
// infinite unless a + b < -1.
double omega_pair_integral(const FieldParams& params, double a, double b);

// W_g = W_{1_{U_n}, pi(g) 1_{U_n}} at resolution (max(m, n, -val t), max(N, n, -val t)).
Symbol coherent_wigner(const GroupElement& g, const ThetaParam& theta, int m = 0, int N = 0);

// J^s W_{g1}([g2]) = integral over U_n of mu_0^s(x) Psi(theta x) du0 with
// x = u0 u2^{-1} u1 t1 - phi(u0) t2, on the grid of coherent_wigner(g1, theta, m, N).
Symbol js_wigner_formula(const GroupElement& g1, const ThetaParam& theta, double s, int m = 0, int N = 0);

// integral over X_n of |J^s W_{g1}([g2])| d[g2], exact at finite resolution.
double js_wigner_slice_l1(const GroupElement& g1, const ThetaParam& theta, double s);

struct WignerL1 {
  double truncated = 0.0;   // sum over |t1| <= q^T
  double tail_bound = 0.0;  // upper bound for |t1| > q^T
  double bound = 0.0;       // q^{-2n}(1 + q^{-n} ||mu_0^{s+1}||_1)
  bool holds() const { return truncated + tail_bound <= bound * (1.0 + 1e-12); }
};

// Double integral of |J^s W_{g1}([g2])| over G_n x X_n for s < -2, g1 truncated at |t1| <= q^T.
WignerL1 js_wigner_l1(const FieldParams& params, const ThetaParam& theta, double s, int truncation);

struct CvReport {
  double opnorm = 0.0;
  double seminorm = 0.0;  // ||J^{-s} F||_inf
  double bound = 0.0;     // (q^n + ||mu_0^{s+1}||_1) ||J^{-s} F||_inf
  bool pass = false;
};

CvReport cv_certify(const Symbol& f, double s);

// The vectors pi(g) 1_{U_n} for g = (u_a, c / p^M), a < p^{M-n}, c < p^M. Each g carries
// Haar weight p^{-M}; index a * p^M + c. Matrix coefficients of any operator at kernel
// scale <= M vanish off this family.
class CoherentFamily {
 public:
  CoherentFamily(const FieldParams& params, const ThetaParam& theta, int scale);

  const FieldParams& params() const { return params_; }
  int scale() const { return M_; }
  std::size_t size() const { return size_; }
  double weight() const { return params_.q_pow(-M_); }
  // Cell values of pi(g_i) 1_{U_n} at scale M, one column per member.
  const Eigen::MatrixXcd& vectors() const { return vectors_; }

  std::uint64_t unit(std::size_t i) const;       // u mod p^M
  std::uint64_t numerator(std::size_t i) const;  // t = numerator / p^M
  GroupElement element(std::size_t i) const;
  // Valuation of the t-part of g_i^{-1} g_j (kInfinity when it lies in O).
  int relative_valuation(std::size_t i, std::size_t j) const;

  // <pi(g_i)1, A pi(g_j)1> for all i, j (kernel refined to the family scale if needed).
  Eigen::MatrixXcd coefficients(const OperatorKernel& a) const;

 private:
  FieldParams params_;
  ThetaParam theta_;
  int M_;
  std::size_t size_;
  Eigen::MatrixXcd vectors_;
};

// sup over g1 of the integral over g2 of |<pi(g1)1, Omega(F) pi(g2)1>| against
// q^{-n}(1 + q^{-n} ||mu_0^{s+1}||_1) ||J^{-s} F||_inf.
Inequality coefficient_row_bound(const Symbol& f, double s);

struct DecayCheck {
  double worst_ratio = 0.0;  // max over pairs of lhs / rhs
  std::size_t pairs = 0;
  std::size_t violations = 0;
  bool holds() const { return violations == 0; }
};

// |<pi(g1)1, Omega(F) pi(g2)1>| <= constant * ||J^{-s} F||_inf * omega_{s+1}(g1^{-1} g2) over the
// whole coherent family, s < -1.
DecayCheck coefficient_decay(const Symbol& f, double s, double constant);
// integral over X_n of |J^s W_{g1}| <= constant * omega_{s+1}(g1) at the given points.
DecayCheck wigner_slice_decay(const std::vector<GroupElement>& points, const ThetaParam& theta, double s,
                              double constant);

struct ReconstructDiagnostics {
  double s_probe = 0.0;
  double decay_constant = 0.0;  // max |c(g1, g2)| / omega_{s_probe}(g1^{-1} g2)
  bool decay_finite = true;
};

// F_A([g]) = q^{2n} sum over the coherent family of c(g1, g2) conj(W_{g1^{-1} g2}([g1^{-1} g])),
// at resolution (M, M).
Symbol reconstruct_symbol(const OperatorKernel& a, const ThetaParam& theta, double s_probe = -1.0,
                          ReconstructDiagnostics* diagnostics = nullptr);

struct ComposeReport {
  double s1 = 0.0;
  double s2 = 0.0;
  // Constant from the product estimate: q^{-3n} ||J^{-s1}F1|| ||J^{-s2}F2|| * omega integral.
  double constant_stated = 0.0;
  // Same chain with the single-coefficient constant q^{-n} and the Peetre factor 2.
  double constant_derived = 0.0;
  bool constant_finite = false;
  DecayCheck stated;
  DecayCheck derived;
  double star_agreement = 0.0;         // symbol of the product against the kernel-route star product
  double reconstruct_agreement = 0.0;  // coherent-coefficient reconstruction against the same
  SeminormReport f3_seminorms;
  bool f3_finite = false;
};

ComposeReport compose_bounded_check(const Symbol& f1, const Symbol& f2, double s1, double s2, int seminorm_max = 3);

}  // namespace fuchs
