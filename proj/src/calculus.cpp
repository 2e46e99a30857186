#include "fuchs/calculus.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fuchs/parallel.hpp"
#include "fuchs/star.hpp"

namespace fuchs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int residue_valuation(std::uint64_t x, int p) {
  if (x == 0) return PAdicScalar::kInfinity;
  return valuation_of(static_cast<std::int64_t>(x), p);
}

// t * p^k mod p^k for |t| <= p^k; zero when t lies in O.
std::uint64_t scaled_numerator(const PAdicScalar& t, int k) {
  if (t.is_zero() || t.valuation() >= 0) return 0;
  if (-t.valuation() > k) throw ParameterError("t lies outside p^{-k} O");
  return t.scaled_residue(k, k);
}

int denominator(const PAdicScalar& t) {
  if (t.is_zero() || t.valuation() >= 0) return 0;
  return -t.valuation();
}

// Cell integrals of kappa_s at scale m for every U_m-cell, in grid order.
std::vector<double> cell_integrals(const FieldParams& fp, double s, int m) {
  UnitCosetGrid grid(fp, m);
  std::vector<double> out(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) out[c] = ks_cell_integral(fp, s, m, grid.rep(c));
  return out;
}

// (J^s f)(a0, b0) = sum_c kbar(c) f(u_{a0} u_c, [u_c^{-1} t_{b0}]); values at (m, N) with m >= N + n.
Eigen::MatrixXcd j_apply_values(const FieldParams& fp, double s, int m, int N, const Eigen::MatrixXcd& f) {
  UnitCosetGrid grid(fp, m);
  GammaGrid tgrid(fp, N);
  ResidueRing ring(fp.p, m);
  const std::vector<double> kbar = cell_integrals(fp, s, m);
  const std::size_t R = grid.size(), C = tgrid.size();
  std::vector<std::uint64_t> inv(R);
  for (std::size_t c = 0; c < R; ++c) inv[c] = ring.inv(grid.rep(c));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.rows(), f.cols());
  parallel_for(R, [&](std::size_t a0) {
    for (std::size_t c = 0; c < R; ++c) {
      if (kbar[c] == 0.0) continue;
      const auto a1 = static_cast<Eigen::Index>(grid.index_of(ring.mul(grid.rep(a0), grid.rep(c))));
      for (std::size_t b0 = 0; b0 < C; ++b0)
        out(static_cast<Eigen::Index>(a0), static_cast<Eigen::Index>(b0)) +=
            kbar[c] * f(a1, static_cast<Eigen::Index>(tgrid.dilate(b0, inv[c])));
    }
  });
  return out;
}

Eigen::MatrixXd j_direct_matrix(const FieldParams& fp, double s, int m, int N) {
  UnitCosetGrid grid(fp, m);
  GammaGrid tgrid(fp, N);
  ResidueRing ring(fp.p, m);
  const std::vector<double> kbar = cell_integrals(fp, s, m);
  const std::size_t R = grid.size(), C = tgrid.size();
  const auto D = static_cast<Eigen::Index>(R * C);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(D, D);
  parallel_for(R, [&](std::size_t a0) {
    for (std::size_t c = 0; c < R; ++c) {
      const std::size_t a1 = grid.index_of(ring.mul(grid.rep(a0), grid.rep(c)));
      const std::uint64_t uinv = ring.inv(grid.rep(c));
      for (std::size_t b0 = 0; b0 < C; ++b0)
        J(static_cast<Eigen::Index>(a0 * C + b0), static_cast<Eigen::Index>(a1 * C + tgrid.dilate(b0, uinv))) +=
            kbar[c];
    }
  });
  return J;
}

Eigen::VectorXcd flatten(const Eigen::MatrixXcd& v) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index a = 0; a < v.rows(); ++a)
    for (Eigen::Index b = 0; b < v.cols(); ++b) out(a * v.cols() + b) = v(a, b);
  return out;
}

Eigen::MatrixXcd unflatten(const Eigen::VectorXcd& x, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd out(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) out(a, b) = x(a * cols + b);
  return out;
}

// Shared evaluator for W_{g1} and the mu_0^s-weighted integrand, on the coherent_wigner grid.
Symbol wigner_integral(const GroupElement& g1, const ThetaParam& theta, int m, int N, const double* s) {
  const FieldParams& fp = g1.params();
  const int T1 = denominator(g1.t);
  const int m_out = std::max({m, fp.n, T1}), N_out = std::max({N, fp.n, T1});
  const int K = std::max(m_out, N_out);
  UnitCosetGrid ugrid(fp, m_out), u0grid(fp, K);
  ResidueRing ring(fp.p, K);
  RootTable roots(fp.p, K);
  const std::uint64_t th = theta.residue(K);
  const std::uint64_t tau1 = scaled_numerator(g1.t, K);
  const std::uint64_t u1 = g1.u.residue(K);
  const std::uint64_t spread = fp.p_pow(K - N_out);

  std::vector<std::uint64_t> u0s(u0grid.size()), phis(u0grid.size());
  for (std::size_t i = 0; i < u0grid.size(); ++i) {
    u0s[i] = u0grid.rep(i);
    phis[i] = ring.phi(u0s[i]);
  }
  // mu_0^s(x) for x = X / p^K, tabulated by val(X).
  std::vector<double> weight(static_cast<std::size_t>(K) + 1, 1.0);
  if (s)
    for (int v = 0; v <= K; ++v) weight[static_cast<std::size_t>(v)] = Mu0{fp.p, std::max(0, K - fp.n - v)}.pow(*s);

  Symbol out = Symbol::zeros(fp, theta, m_out, N_out);
  const auto cols = out.values().cols();
  parallel_for(ugrid.size(), [&](std::size_t a2) {
    const std::uint64_t A = ring.mul(ring.mul(ring.inv(ugrid.rep(a2)), u1), tau1);
    for (Eigen::Index b2 = 0; b2 < cols; ++b2) {
      const std::uint64_t beta = static_cast<std::uint64_t>(b2) * spread;
      cplx acc = 0.0;
      for (std::size_t i = 0; i < u0s.size(); ++i) {
        const std::uint64_t X = ring.sub(ring.mul(u0s[i], A), ring.mul(phis[i], beta));
        const cplx ph = roots(ring.mul(th, X));
        if (s) {
          const int v = X == 0 ? K : std::min(K, residue_valuation(X, fp.p));
          acc += weight[static_cast<std::size_t>(v)] * ph;
        } else {
          acc += ph;
        }
      }
      out.values()(static_cast<Eigen::Index>(a2), b2) = acc * u0grid.cell_volume();
    }
  });
  return out;
}

// Eigen 3.4's tridiagonal QR fails to converge on some of the highly degenerate J matrices
// (p = 5, resolution (3, 2)); the one-sided Jacobi SVD is used there instead. For a symmetric
// positive definite matrix U = V, and a Cholesky factorisation certifies definiteness.
struct SymmetricSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SymmetricSpectrum symmetric_spectrum(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() == Eigen::Success) return {eig.eigenvalues(), eig.eigenvectors()};
  if (Eigen::LLT<Eigen::MatrixXd>(a).info() != Eigen::Success)
    throw std::runtime_error("symmetric matrix is not positive definite");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if ((svd.matrixU() - svd.matrixV()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("spectral decomposition of a symmetric matrix failed");
  return {svd.singularValues(), svd.matrixV()};
}

bool within(double lhs, double rhs, double slack) {
  if (std::isinf(rhs) && rhs > 0) return true;
  return lhs <= rhs + slack * std::max(1.0, std::abs(rhs));
}

// Streams C = V^H A V block by block; visit(i, row) receives row i of C.
template <typename Visit>
void for_each_coefficient_row(const CoherentFamily& fam, const OperatorKernel& a, Visit&& visit) {
  const OperatorKernel ra = a.scale() < fam.scale() ? a.refined(fam.scale()) : a;
  if (ra.scale() != fam.scale()) throw ParameterError("operator is finer than the coherent family");
  // <x, y> on cell values carries the cell volume p^{-M}.
  const Eigen::MatrixXcd B = ra.action() * fam.vectors() * fam.weight();
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (fam.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t blk) {
    const std::size_t lo = blk * kBlock, hi = std::min(fam.size(), lo + kBlock);
    const Eigen::MatrixXcd rows =
        fam.vectors().middleCols(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo)).adjoint() * B;
    for (std::size_t i = lo; i < hi; ++i) visit(i, rows.row(static_cast<Eigen::Index>(i - lo)));
  });
}

// omega_s(g_i^{-1} g_j) for every pair, evaluated through the relative valuation.
struct OmegaTable {
  const FieldParams* fp;
  double s;
  std::vector<double> by_val;  // index val + M, last slot for t in O
  int M;
  OmegaTable(const FieldParams& params, double s_, int M_) : fp(&params), s(s_), M(M_) {
    by_val.resize(static_cast<std::size_t>(M_) + 1);
    for (int v = -M_; v < 0; ++v) by_val[static_cast<std::size_t>(v + M_)] = omega_from_valuation(params, s_, v);
    by_val[static_cast<std::size_t>(M_)] = omega_from_valuation(params, s_, PAdicScalar::kInfinity);
  }
  double operator()(int val) const {
    if (val >= 0) return by_val.back();
    return by_val[static_cast<std::size_t>(val + M)];
  }
};

DecayCheck decay_over_family(const CoherentFamily& fam, const OperatorKernel& a, double s_weight, double scale) {
  const OmegaTable omega(fam.params(), s_weight, fam.scale());
  std::vector<DecayCheck> per_row(fam.size());
  for_each_coefficient_row(fam, a, [&](std::size_t i, const auto& row) {
    DecayCheck& d = per_row[i];
    for (std::size_t j = 0; j < fam.size(); ++j) {
      const double lhs = std::abs(row(static_cast<Eigen::Index>(j)));
      const double rhs = scale * omega(fam.relative_valuation(i, j));
      ++d.pairs;
      if (!within(lhs, rhs, 1e-9)) ++d.violations;
      if (rhs > 0 && std::isfinite(rhs)) d.worst_ratio = std::max(d.worst_ratio, lhs / rhs);
    }
  });
  DecayCheck out;
  for (const auto& d : per_row) {
    out.pairs += d.pairs;
    out.violations += d.violations;
    out.worst_ratio = std::max(out.worst_ratio, d.worst_ratio);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- kappa_s

double mu0_l1_norm(const FieldParams& params, double sigma) {
  if (!(sigma < -1.0)) throw ParameterError("mu_0^sigma is integrable only for sigma < -1");
  const double q = params.p, r = std::pow(q, sigma + 1.0);
  return params.q_pow(params.n) * (1.0 + (1.0 - 1.0 / q) * r / (1.0 - r));
}

double ks_cell_integral(const FieldParams& params, double s, int scale, std::uint64_t residue) {
  if (scale < params.n) throw ParameterError("cell scale below n");
  const std::uint64_t mod = params.p_pow(scale);
  const std::uint64_t x = (residue % mod + mod - 1) % mod;
  if (x % params.p_pow(params.n) != 0) throw DomainError("residue is not in U_n");
  const int v = residue_valuation(x, params.p);
  const double p = params.p;
  double acc = params.q_pow(params.n);
  for (int j = params.n + 1; j <= scale; ++j) {
    const double w = std::pow(p, s * (j - params.n));
    acc += w * ((v >= j ? std::pow(p, j) : 0.0) - (v >= j - 1 ? std::pow(p, j - 1) : 0.0));
  }
  return acc * params.q_pow(-scale);
}

KsKernel::KsKernel(const FieldParams& params, double s, int v_max) : params_(params), s_(s), v_max_(v_max) {
  if (!(s < -1.0)) throw ParameterError("kappa_s needs s < -1");
  if (v_max < params.n) throw ParameterError("v_max below n");
  for (int v = params.n; v <= v_max; ++v) values_.push_back(value(v));
  tail_ = ks_cell_integral(params, s, v_max + 1, 1);
}

double KsKernel::value(int v) const {
  if (v < params_.n) throw DomainError("kappa_s is supported on U_n");
  const double p = params_.p;
  const int n = params_.n;
  double acc = params_.q_pow(n);
  for (int j = n + 1; j <= v; ++j) acc += std::pow(p, s_ * (j - n)) * std::pow(p, j - 1) * (p - 1.0);
  return acc - std::pow(p, s_ * (v + 1 - n)) * std::pow(p, v);
}

double KsKernel::at_identity() const { return mu0_l1_norm(params_, s_); }

double KsKernel::at(const PrincipalUnit& u) const {
  const PAdicScalar x = u.value() - PAdicScalar::from_integer(params_.p, 1, u.precision());
  if (x.is_zero()) return at_identity();
  return value(x.valuation());
}

KsKernel ks_kernel(const FieldParams& params, double s, int v_max) {
  return KsKernel(params, s, v_max > 0 ? v_max : params.n + 4);
}

// ---------------------------------------------------------------- J^s

int closure_scale(const FieldParams& params, int m, int N) { return std::max(m, N + params.n); }

JOperator::JOperator(const FieldParams& params, double s, int m, int N, Eigen::MatrixXd matrix)
    : params_(params), s_(s), m_(m), N_(N), matrix_(std::move(matrix)) {
  const auto D = static_cast<Eigen::Index>(params.p_pow(m - params.n) * params.p_pow(N - params.n));
  if (matrix_.rows() != D || matrix_.cols() != D) throw ParameterError("J matrix shape does not match resolution");
}

Symbol JOperator::apply(const Symbol& f) const {
  if (f.m() != m_ || f.N() != N_) throw ParameterError("symbol resolution differs from the J operator");
  const Eigen::VectorXcd x = matrix_.cast<cplx>() * flatten(f.values());
  return f.with_values(unflatten(x, f.values().rows(), f.values().cols()));
}

JOperator j_matrix(const FieldParams& params, double s, int m, int N, JRoute route) {
  if (N < params.n) throw ParameterError("t-cutoff below n");
  if (m < N + params.n) throw ParameterError("J^s needs the closure condition m >= N + n");
  if (route == JRoute::direct) return JOperator(params, s, m, N, j_direct_matrix(params, s, m, N));
  const SymmetricSpectrum spec = symmetric_spectrum(j_direct_matrix(params, -2.0, m, N));
  if (spec.values.minCoeff() <= 0.0)
    throw std::runtime_error("J^{-2} is not positive definite (min eigenvalue " +
                             std::to_string(spec.values.minCoeff()) + ")");
  const Eigen::VectorXd powered = spec.values.array().pow(-s / 2.0).matrix();
  return JOperator(params, s, m, N, spec.vectors * powered.asDiagonal() * spec.vectors.transpose());
}

Eigen::VectorXd j_spectrum(const FieldParams& params, double s, int m, int N) {
  if (m < N + params.n) throw ParameterError("J^s needs the closure condition m >= N + n");
  return symmetric_spectrum(j_direct_matrix(params, s, m, N)).values;
}

Symbol apply_j(const Symbol& f, double s) {
  const FieldParams& fp = f.params();
  const Symbol g = f.refined(closure_scale(fp, f.m(), f.N()), f.N());
  return g.with_values(j_apply_values(fp, s, g.m(), g.N(), g.values()));
}

Symbol apply_i(const Symbol& f, int j) {
  const FieldParams& fp = f.params();
  Eigen::MatrixXcd v = f.values();
  for (Eigen::Index b = 0; b < v.cols(); ++b) {
    const int val = residue_valuation(static_cast<std::uint64_t>(b), fp.p);
    const int e = val == PAdicScalar::kInfinity ? 0 : std::max(0, f.N() - fp.n - val);
    v.col(b) *= Mu0{fp.p, e}.pow(j);
  }
  return f.with_values(std::move(v));
}

bool SeminormReport::all_finite() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const SeminormEntry& e) { return std::isfinite(e.value) && e.value >= 0.0; });
}

SeminormReport b_seminorms(const Symbol& f, int j_max) {
  SeminormReport r;
  for (int k = 0; k <= j_max; ++k) r.entries.push_back({k, 0, apply_j(f, k).sup_norm()});
  return r;
}

SeminormReport s_seminorms(const Symbol& f, int k_max, int j_max) {
  SeminormReport r;
  for (int j = 0; j <= j_max; ++j) {
    const Symbol ij = apply_i(f, j);
    for (int k = 0; k <= k_max; ++k) r.entries.push_back({k, j, apply_j(ij, k).sup_norm()});
  }
  return r;
}

bool Inequality::holds(double slack) const { return within(lhs, rhs, slack); }

Inequality product_inequality(const Symbol& f1, const Symbol& f2, int j) {
  const auto [a, b] = reconcile(f1, f2);
  const FieldParams& fp = a.params();
  const double l1 = mu0_l1_norm(fp, -2.0);
  const Symbol prod = a.with_values(a.values().cwiseProduct(b.values()));
  return {apply_j(prod, j).sup_norm(),
          fp.q_pow(-2.0 * fp.n) * l1 * l1 * apply_j(a, j + 2).sup_norm() * apply_j(b, j + 2).sup_norm()};
}

Inequality ideal_inequality(const Symbol& f, const Symbol& big_f, int k, int j) {
  const auto [a, b] = reconcile(f, big_f);
  const FieldParams& fp = a.params();
  const double l1 = mu0_l1_norm(fp, -2.0);
  const Symbol prod = a.with_values(a.values().cwiseProduct(b.values()));
  return {apply_j(apply_i(prod, j), k).sup_norm(),
          fp.q_pow(-2.0 * fp.n) * l1 * l1 * apply_j(apply_i(a, j), k + 2).sup_norm() * apply_j(b, k + 2).sup_norm()};
}

// ---------------------------------------------------------------- omega_s

double omega_from_valuation(const FieldParams& params, double s, int val) {
  const double inside = (val == PAdicScalar::kInfinity || val >= -params.n) ? 1.0 : 0.0;
  return mu0_from_valuation(val, params).pow(s) + inside;
}

double omega_weight(const FieldParams& params, double s, const GroupElement& g) {
  return omega_from_valuation(params, s, g.t.valuation());
}

double omega_pair_integral(const FieldParams& params, double a, double b) {
  if (!(a + b < -1.0)) return kInf;
  return params.q_pow(-params.n) * (mu0_l1_norm(params, a + b) + 3.0 * params.q_pow(params.n));
}

// ---------------------------------------------------------------- coherent Wigner functions

Symbol coherent_wigner(const GroupElement& g, const ThetaParam& theta, int m, int N) {
  return wigner_integral(g, theta, m, N, nullptr);
}

Symbol js_wigner_formula(const GroupElement& g1, const ThetaParam& theta, double s, int m, int N) {
  return wigner_integral(g1, theta, m, N, &s);
}

double js_wigner_slice_l1(const GroupElement& g1, const ThetaParam& theta, double s) {
  const Symbol js = apply_j(coherent_wigner(g1, theta), s);
  return js.values().cwiseAbs().sum() * js.params().q_pow(-js.m());
}

WignerL1 js_wigner_l1(const FieldParams& fp, const ThetaParam& theta, double s, int T) {
  if (!(s < -2.0)) throw ParameterError("the integrated Wigner bound needs s < -2");
  if (T < fp.n + 1) throw ParameterError("truncation must reach past the flat region: T >= n + 1");
  UnitCosetGrid grid(fp, T);
  ResidueRing ring(fp.p, T);
  RootTable roots(fp.p, T);
  const std::uint64_t th = theta.residue(T);
  const std::size_t R = grid.size();
  const std::uint64_t tcount = fp.p_pow(T);
  std::vector<std::uint64_t> phis(R);
  for (std::size_t i = 0; i < R; ++i) phis[i] = ring.phi(grid.rep(i));
  std::vector<double> weight(static_cast<std::size_t>(T) + 1);
  for (int v = 0; v <= T; ++v) weight[static_cast<std::size_t>(v)] = Mu0{fp.p, std::max(0, T - fp.n - v)}.pow(s);

  // The integrand depends on (u1, u2) only through w = u2^{-1} u1; each w occurs p^{T-n} times.
  std::vector<double> per_t1(tcount, 0.0);
  parallel_for(tcount, [&](std::size_t tau1) {
    double acc = 0.0;
    for (std::size_t wi = 0; wi < R; ++wi) {
      const std::uint64_t A = ring.mul(grid.rep(wi), tau1);
      for (std::size_t b2 = 0; b2 < R; ++b2) {
        const std::uint64_t beta = b2;  // t2 = b2 / p^T at cutoff T
        cplx inner = 0.0;
        for (std::size_t i = 0; i < R; ++i) {
          const std::uint64_t X = ring.sub(ring.mul(grid.rep(i), A), ring.mul(phis[i], beta));
          const int v = X == 0 ? T : std::min(T, residue_valuation(X, fp.p));
          inner += weight[static_cast<std::size_t>(v)] * roots(ring.mul(th, X));
        }
        acc += std::abs(inner) * grid.cell_volume();
      }
    }
    per_t1[tau1] = acc;
  });
  double total = 0.0;
  for (double v : per_t1) total += v;
  // u1 and u2 cells carry p^{-T} each; w absorbs one factor of p^{T-n}.
  WignerL1 out;
  out.truncated = total * static_cast<double>(R) * grid.cell_volume() * grid.cell_volume();
  const double q = fp.p;
  const int j0 = std::max(T, fp.n);
  out.tail_bound = fp.q_pow(-4.0 * fp.n) * (1.0 - 1.0 / q) * std::pow(q, -s * fp.n) *
                   std::pow(q, (s + 2.0) * (j0 + 1)) / (1.0 - std::pow(q, s + 2.0));
  out.bound = fp.q_pow(-2.0 * fp.n) * (1.0 + fp.q_pow(-fp.n) * mu0_l1_norm(fp, s + 1.0));
  return out;
}

CvReport cv_certify(const Symbol& f, double s) {
  if (!(s < -2.0)) throw ParameterError("the operator-norm estimate needs s < -2");
  const FieldParams& fp = f.params();
  CvReport r;
  r.opnorm = quantize_direct(f).op_norm();
  r.seminorm = apply_j(f, -s).sup_norm();
  r.bound = (fp.q_pow(fp.n) + mu0_l1_norm(fp, s + 1.0)) * r.seminorm;
  r.pass = r.opnorm <= r.bound * (1.0 + 1e-9);
  return r;
}

// ---------------------------------------------------------------- coherent family

CoherentFamily::CoherentFamily(const FieldParams& params, const ThetaParam& theta, int scale)
    : params_(params), theta_(theta), M_(scale) {
  if (scale < params.n) throw ParameterError("coherent family scale below n");
  UnitCosetGrid grid(params, scale);
  ResidueRing ring(params.p, scale);
  RootTable roots(params.p, scale);
  const std::uint64_t th = theta.residue(scale);
  const std::uint64_t tcount = params.p_pow(scale);
  size_ = grid.size() * tcount;
  vectors_.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(size_));
  for (std::size_t i0 = 0; i0 < grid.size(); ++i0) {
    const std::uint64_t u0_inv = ring.inv(grid.rep(i0));
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const std::uint64_t base = ring.mul(th, ring.mul(u0_inv, grid.rep(a)));
      for (std::uint64_t c = 0; c < tcount; ++c)
        vectors_(static_cast<Eigen::Index>(i0), static_cast<Eigen::Index>(a * tcount + c)) = roots(ring.mul(base, c));
    }
  }
}

std::uint64_t CoherentFamily::unit(std::size_t i) const {
  return 1 + params_.p_pow(params_.n) * (i / params_.p_pow(M_));
}

std::uint64_t CoherentFamily::numerator(std::size_t i) const { return i % params_.p_pow(M_); }

GroupElement CoherentFamily::element(std::size_t i) const {
  const int prec = max_precision(params_.p);
  const std::uint64_t c = numerator(i);
  const PAdicScalar t = c == 0 ? PAdicScalar::zero(params_.p)
                               : PAdicScalar::from_rational(params_.p, static_cast<std::int64_t>(c),
                                                            static_cast<std::int64_t>(params_.p_pow(M_)), prec);
  return GroupElement(PrincipalUnit::from_residue(params_, unit(i), prec), t);
}

int CoherentFamily::relative_valuation(std::size_t i, std::size_t j) const {
  // t-part of g_i^{-1} g_j = -u_j^{-1} u_i t_i + t_j.
  ResidueRing ring(params_.p, M_);
  const std::uint64_t x =
      ring.sub(numerator(j), ring.mul(ring.mul(ring.inv(unit(j)), unit(i)), numerator(i)));
  if (x == 0) return PAdicScalar::kInfinity;
  return residue_valuation(x, params_.p) - M_;
}

Eigen::MatrixXcd CoherentFamily::coefficients(const OperatorKernel& a) const {
  Eigen::MatrixXcd C(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  for_each_coefficient_row(*this, a, [&](std::size_t i, const auto& row) { C.row(static_cast<Eigen::Index>(i)) = row; });
  return C;
}

Inequality coefficient_row_bound(const Symbol& f, double s) {
  if (!(s < -2.0)) throw ParameterError("the integrated coefficient bound needs s < -2");
  const FieldParams& fp = f.params();
  const OperatorKernel a = quantize_direct(f);
  const CoherentFamily fam(fp, f.theta(), a.scale());
  std::vector<double> rows(fam.size());
  for_each_coefficient_row(fam, a, [&](std::size_t i, const auto& row) { rows[i] = row.cwiseAbs().sum() * fam.weight(); });
  const double lhs = *std::max_element(rows.begin(), rows.end());
  const double rhs = fp.q_pow(-fp.n) * (1.0 + fp.q_pow(-fp.n) * mu0_l1_norm(fp, s + 1.0)) * apply_j(f, -s).sup_norm();
  return {lhs, rhs};
}

DecayCheck coefficient_decay(const Symbol& f, double s, double constant) {
  if (!(s < -1.0)) throw ParameterError("the pointwise coefficient bound needs s < -1");
  const OperatorKernel a = quantize_direct(f);
  const CoherentFamily fam(f.params(), f.theta(), a.scale());
  return decay_over_family(fam, a, s + 1.0, constant * apply_j(f, -s).sup_norm());
}

DecayCheck wigner_slice_decay(const std::vector<GroupElement>& points, const ThetaParam& theta, double s,
                              double constant) {
  DecayCheck out;
  for (const GroupElement& g : points) {
    const double lhs = js_wigner_slice_l1(g, theta, s);
    const double rhs = constant * omega_weight(g.params(), s + 1.0, g);
    ++out.pairs;
    if (!within(lhs, rhs, 1e-9)) ++out.violations;
    out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  return out;
}

// ---------------------------------------------------------------- reconstruction

Symbol reconstruct_symbol(const OperatorKernel& a, const ThetaParam& theta, double s_probe,
                          ReconstructDiagnostics* diagnostics) {
  const FieldParams& fp = a.params();
  const int M = a.scale();
  const CoherentFamily fam(fp, theta, M);
  const Eigen::MatrixXcd C = fam.coefficients(a);
  UnitCosetGrid grid(fp, M);
  ResidueRing ring(fp.p, M);
  RootTable roots(fp.p, M);
  const std::uint64_t th = theta.residue(M);
  const std::size_t R = grid.size();
  const std::uint64_t tcount = fp.p_pow(M);
  const std::uint64_t bmod = fp.p_pow(M - fp.n);

  if (diagnostics) {
    const OmegaTable omega(fp, s_probe, M);
    double worst = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = 0; j < fam.size(); ++j)
        worst = std::max(worst, std::abs(C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) /
                                    omega(fam.relative_valuation(i, j)));
    diagnostics->s_probe = s_probe;
    diagnostics->decay_constant = worst;
    diagnostics->decay_finite = std::isfinite(worst);
  }

  // W_h([x]) with u_x^{-1} u_h = u_a, t_h = tau / p^M, t_x = bx / p^M:
  //   sum over u0 of p^{-M} Psi(theta (u0 u_a tau - phi(u0) bx) / p^M).
  std::vector<cplx> table(R * tcount * bmod);
  parallel_for(R, [&](std::size_t ai) {
    const std::uint64_t ua = grid.rep(ai);
    for (std::uint64_t tau = 0; tau < tcount; ++tau)
      for (std::uint64_t bx = 0; bx < bmod; ++bx) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < R; ++i) {
          const std::uint64_t u0 = grid.rep(i);
          acc += roots(ring.mul(th, ring.sub(ring.mul(ring.mul(u0, ua), tau), ring.mul(ring.phi(u0), bx))));
        }
        table[(ai * tcount + tau) * bmod + bx] = acc * grid.cell_volume();
      }
  });

  std::vector<std::uint64_t> inv(R);
  for (std::size_t i = 0; i < R; ++i) inv[i] = ring.inv(grid.rep(i));
  Symbol out = Symbol::zeros(fp, theta, M, M);
  const double w = fp.q_pow(2.0 * fp.n) * fam.weight() * fam.weight();
  parallel_for(R, [&](std::size_t ui) {
    for (std::uint64_t b = 0; b < bmod; ++b) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < fam.size(); ++i) {
        const std::size_t a1 = i / tcount;
        const std::uint64_t c1 = fam.numerator(i);
        const std::uint64_t bx = ring.sub(b, ring.mul(ring.mul(inv[ui], grid.rep(a1)), c1)) % bmod;
        for (std::size_t j = 0; j < fam.size(); ++j) {
          const cplx cij = C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          const std::size_t a2 = j / tcount;
          const std::uint64_t tau = ring.sub(fam.numerator(j), ring.mul(ring.mul(inv[a2], grid.rep(a1)), c1));
          const std::size_t ai = grid.index_of(ring.mul(inv[ui], grid.rep(a2)));
          acc += cij * std::conj(table[(ai * tcount + tau) * bmod + bx]);
        }
      }
      out.values()(static_cast<Eigen::Index>(ui), static_cast<Eigen::Index>(b)) = acc * w;
    }
  });
  return out;
}

ComposeReport compose_bounded_check(const Symbol& f1, const Symbol& f2, double s1, double s2, int seminorm_max) {
  if (!(s1 < -1.0) || !(s2 < -1.0)) throw ParameterError("the composition estimate needs s1, s2 < -1");
  const auto [a, b] = reconcile(f1, f2);
  const FieldParams& fp = a.params();
  const OperatorKernel prod = compose(quantize_direct(a), quantize_direct(b));
  const CoherentFamily fam(fp, a.theta(), prod.scale());

  ComposeReport r;
  r.s1 = s1;
  r.s2 = s2;
  const double n1 = apply_j(a, -s1).sup_norm(), n2 = apply_j(b, -s2).sup_norm();
  const double integral = omega_pair_integral(fp, s1 + 1.0, -s2 - 1.0);
  r.constant_finite = std::isfinite(integral);
  r.constant_stated = r.constant_finite ? fp.q_pow(-3.0 * fp.n) * n1 * n2 * integral : kInf;
  r.constant_derived = r.constant_finite ? 2.0 * fp.q_pow(-fp.n) * n1 * n2 * integral : kInf;
  r.stated = decay_over_family(fam, prod, s2 + 1.0, r.constant_stated);
  r.derived = decay_over_family(fam, prod, s2 + 1.0, r.constant_derived);

  const Symbol f3 = symbol_of_operator(prod, a.theta());
  const Symbol kernel_route = star_via_kernel(a, b);
  r.star_agreement = max_abs_diff(f3, kernel_route);
  r.reconstruct_agreement = max_abs_diff(reconstruct_symbol(prod, a.theta()), kernel_route);
  r.f3_seminorms = b_seminorms(f3, seminorm_max);
  r.f3_finite = r.f3_seminorms.all_finite();
  return r;
}

}  // namespace fuchs
