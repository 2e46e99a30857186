// Acceptance run: eleven criteria, each evaluated at (p, n, m, N) = (3, 1, 3, 2), (5, 1, 3, 2)
// and (3, 2, 4, 3). Prints detail lines per configuration and one PASS/FAIL line per criterion.
// Runtime limits apply at the reference configuration (3, 1, 3, 2).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fuchs/calculus.hpp"
#include "fuchs/star.hpp"

using namespace fuchs;

namespace {

constexpr int kPrec = 20;

struct Config {
  int p;
  int n;
  int m;
  int N;
  FieldParams fp() const { return FieldParams::make(p, n); }
  bool reference() const { return p == 3 && n == 1 && m == 3 && N == 2; }
  std::string tag() const {
    return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " m=" + std::to_string(m) + " N=" + std::to_string(N);
  }
};

// Collects one criterion's sub-checks for one configuration.
class Ledger {
 public:
  explicit Ledger(std::string tag) : tag_(std::move(tag)) {}

  // value <= bound.
  void le(const std::string& what, double value, double bound) {
    record(what, value <= bound, value, "<=", bound);
  }
  void ok(const std::string& what, bool pass) {
    pass_ = pass_ && pass;
    std::printf("    [%s] %-58s %s\n", tag_.c_str(), what.c_str(), pass ? "ok" : "VIOLATED");
  }
  void info(const std::string& what, double value, double bound, bool holds) {
    std::printf("    [%s] %-58s %.6g <= %.6g %s (informational)\n", tag_.c_str(), what.c_str(), value, bound,
                holds ? "holds" : "fails");
  }
  bool pass() const { return pass_; }

 private:
  void record(const std::string& what, bool pass, double value, const char* rel, double bound) {
    pass_ = pass_ && pass;
    std::printf("    [%s] %-58s %.6g %s %.6g %s\n", tag_.c_str(), what.c_str(), value, rel, bound,
                pass ? "ok" : "VIOLATED");
  }

  std::string tag_;
  bool pass_ = true;
};

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  cplx complex() { return {normal_(gen_), normal_(gen_)}; }
  std::uint64_t below(std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(gen_); }

  ConfigFunction config(const UnitCosetGrid& g) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
    for (auto& x : v) x = complex();
    return ConfigFunction(g, v);
  }
  Symbol symbol(const FieldParams& fp, const ThetaParam& theta, int m, int N) {
    Symbol f = Symbol::zeros(fp, theta, m, N);
    for (Eigen::Index i = 0; i < f.values().size(); ++i) f.values().data()[i] = complex();
    return f;
  }
  // u uniform modulo p^{u_scale}, t = c / p^{t_scale} with c uniform modulo p^{t_scale + 1}.
  GroupElement element(const FieldParams& fp, int u_scale, int t_scale) {
    const std::uint64_t u = 1 + fp.p_pow(fp.n) * below(fp.p_pow(u_scale - fp.n));
    const std::uint64_t c = below(fp.p_pow(t_scale + 1));
    return GroupElement(PrincipalUnit::from_residue(fp, u, kPrec),
                        c == 0 ? PAdicScalar::zero(fp.p)
                               : PAdicScalar::from_rational(fp.p, static_cast<std::int64_t>(c),
                                                            static_cast<std::int64_t>(fp.p_pow(t_scale)), kPrec));
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ThetaParam theta_for(const Config& c) { return ThetaParam::from_digits(c.p, {c.p - 1, 1}); }

// Psi(x u) on (U_n / U_m) x Gamma, x = c / p^m.
Symbol character_symbol(const FieldParams& fp, const ThetaParam& theta, int m, int N, std::uint64_t c) {
  const PAdicScalar x = c == 0 ? PAdicScalar::zero(fp.p)
                               : PAdicScalar::from_rational(fp.p, static_cast<std::int64_t>(c),
                                                            static_cast<std::int64_t>(fp.p_pow(m)), kPrec);
  Symbol f = Symbol::zeros(fp, theta, m, N);
  const UnitCosetGrid g(fp, m);
  for (std::size_t a = 0; a < g.size(); ++a)
    f.values().row(static_cast<Eigen::Index>(a)).setConstant(psi(x * g.unit(a, kPrec).value()));
  return f;
}

// ---------------------------------------------------------------------------------------

bool sigma_phi_isometry(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const int top = fp.n + 3;
  std::vector<PrincipalUnit> units;
  for (std::uint64_t a = 0; a < fp.p_pow(3); ++a) units.push_back(PrincipalUnit::from_residue(fp, 1 + fp.p_pow(fp.n) * a, top));
  std::size_t pairs = 0, bad = 0;
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      const int v = (units[i].value() - units[j].value()).valuation();
      if ((square(units[i]).value() - square(units[j]).value()).valuation() != v) ++bad;
      if ((phi(units[i]) - phi(units[j])).valuation() != v) ++bad;
      ++pairs;
    }
  L.ok("pairs in U_n / U_{n+3}: " + std::to_string(pairs) + ", valuation mismatches: " + std::to_string(bad),
       bad == 0 && pairs == units.size() * (units.size() - 1) / 2);
  return L.pass();
}

bool fourier_identities(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  Random rng(1000 + c.p * 10 + c.n);
  {
    KFunction f{KGrid(fp.p, -c.N, c.m), {}};
    f.values.resize(static_cast<Eigen::Index>(f.grid.size()));
    for (auto& x : f.values) x = rng.complex();
    const KFunction hat = fourier_k(f);
    L.le("||F_k f||^2 = ||f||^2 (relative)", rel(hat.norm2(), f.norm2()), 1e-12);
    L.le("F_k^{-1} F_k f = f (max entry)", (inverse_fourier_k(hat).values - f.values).cwiseAbs().maxCoeff(), 1e-12);
  }
  GammaGrid grid(fp, c.N);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
  for (auto& x : v) x = rng.complex();
  const Eigen::VectorXcd hat = fourier_gamma(grid, v);
  L.le("sum |f|^2 = p^{n-N} sum |F_Gamma f|^2 (relative)", rel(hat.squaredNorm() * DualGrid(fp, c.N).weight(), v.squaredNorm()),
       1e-12);
  L.le("F_Gamma^{-1} F_Gamma f = f (max entry)", (inverse_fourier_gamma(grid, hat) - v).cwiseAbs().maxCoeff(), 1e-12);
  const KFunction fk{KGrid(fp.p, -c.N, -fp.n), v};
  L.le("sum_[t] f([t]) = q^{-n} integral_k f", std::abs(v.sum() - fp.q_pow(-fp.n) * fk.values.sum() * fk.grid.cell_volume()),
       1e-12);
  L.le("F_k f = q^n F_Gamma f (max entry)", (fourier_k(fk).values - fp.q_pow(fp.n) * hat).cwiseAbs().maxCoeff(), 1e-12);
  const UnitCosetGrid ug(fp, c.m);
  const IdentityCheck sq = square_substitution(rng.config(ug));
  L.le("integral f(u^2) du = integral f(u) du over U_n", std::abs(sq.lhs - sq.rhs), 1e-12);
  Eigen::VectorXcd h(static_cast<Eigen::Index>(ug.size()));
  for (auto& x : h) x = rng.complex();
  const IdentityCheck ph = phi_substitution(fp, c.m, h);
  L.le("integral h(u - 1/u) du = integral_{p^n O} h(x) dx", std::abs(ph.lhs - ph.rhs), 1e-12);
  return L.pass();
}

bool square_integrability(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  const int s = fp.n + 1;
  const UnitCosetGrid g(fp, s);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const ConfigFunction a = ConfigFunction::cell_indicator(g, i), b = ConfigFunction::cell_indicator(g, j);
      // |theta| = 1 for a unit theta.
      worst = std::max(worst, rel(orthogonality_integral(a, b, theta, s), a.norm2() * b.norm2()));
    }
  L.le("integral |<e_i, pi(g) e_j>|^2 = ||e_i||^2 ||e_j||^2 / |theta|, all pairs", worst, 1e-10);
  Random rng(2000 + c.p * 10 + c.n);
  double res = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ConfigFunction a = rng.config(g), b = rng.config(g), w = rng.config(g);
    res = std::max(res, std::abs(coherent_resolve(a, b, w, theta, s) - inner(a, b)) / std::sqrt(a.norm2() * b.norm2()));
  }
  L.le("coherent resolution of <phi1, phi2>, 50 triples", res, 1e-10);
  return L.pass();
}

bool quantization_unitarity(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(3000 + c.p * 10 + c.n);
  double hs = 0.0, routes = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Symbol f = rng.symbol(fp, theta, c.m, c.N);
    const auto [lhs, rhs] = hs_isometry_check(f);
    hs = std::max(hs, rel(lhs, rhs));
    routes = std::max(routes, max_abs_diff(quantize_direct(f), kernel_formula(f)));
  }
  L.le("||Omega(f)||_HS^2 = q^n ||f||^2 (relative), 100 symbols", hs, 1e-10);
  L.le("direct assembly = kernel formula (max entry)", routes, 1e-10);
  return L.pass();
}

bool wigner_inversion(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(4000 + c.p * 10 + c.n);
  const UnitCosetGrid g(fp, c.m);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ConfigFunction p1 = rng.config(g), p2 = rng.config(g);
    worst = std::max(worst, max_abs_diff(quantize_direct(wigner(p1, p2, theta)), OperatorKernel::rank_one(p2, p1)));
  }
  L.le("Omega(W_{phi1,phi2}) = |phi2><phi1|, 50 pairs", worst, 1e-10);
  const int M = std::max(c.m, c.N);
  const OperatorKernel id = quantize_direct(Symbol::constant(fp, theta, fp.n, M, 1.0));
  L.le("Omega(1) = Id at (n, M)", max_abs_diff(id, OperatorKernel::identity(fp, M)), 1e-10);
  return L.pass();
}

bool star_product(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(5000 + c.p * 10 + c.n);
  double routes = 0.0, assoc = 0.0, trace = 0.0, cov = 0.0, rule = 0.0;
  const UnitCosetGrid g(fp, c.m);
  for (int k = 0; k < 5; ++k) {
    const Symbol a = rng.symbol(fp, theta, c.m, c.N), b = rng.symbol(fp, theta, c.m, c.N),
                 d = rng.symbol(fp, theta, c.m, c.N);
    const Symbol ab = star_via_operators(a, b);
    routes = std::max(routes, max_abs_diff(ab, star_via_kernel(a, b)));
    assoc = std::max(assoc, max_abs_diff(star_via_operators(ab, d), star_via_operators(a, star_via_operators(b, d))));
    const IdentityCheck tr = traciality_check(a, b);
    trace = std::max(trace, std::abs(tr.lhs - tr.rhs));
    cov = std::max(cov, covariance_check(a, b, rng.element(fp, c.m, c.N)));
    const ConfigFunction p1 = rng.config(g), p2 = rng.config(g), p3 = rng.config(g), p4 = rng.config(g);
    const Symbol w = wigner(p3, p2, theta);
    rule = std::max(rule, max_abs_diff(star_via_operators(wigner(p1, p2, theta), wigner(p3, p4, theta)),
                                       w.with_values(w.values() * inner(p1, p4))));
  }
  L.le("operator route = three-point kernel route", routes, 1e-9);
  L.le("(f1 * f2) * f3 = f1 * (f2 * f3)", assoc, 1e-9);
  L.le("integral f1 * f2 = integral f1 f2", trace, 1e-9);
  L.le("lambda_g(f1 * f2) = lambda_g f1 * lambda_g f2", cov, 1e-9);
  L.le("W_{1,2} * W_{3,4} = <phi1, phi4> W_{3,2}", rule, 1e-9);
  return L.pass();
}

bool covariance(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(6000 + c.p * 10 + c.n);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Symbol f = rng.symbol(fp, theta, c.m, c.N);
    const GroupElement g = rng.element(fp, c.m, c.N);
    worst = std::max(worst, max_abs_diff(conjugate_by(quantize_direct(f), g, theta), quantize_direct(translate(f, g))));
  }
  L.le("pi(g) Omega(f) pi(g)^* = Omega(f^g), 50 pairs", worst, 1e-10);
  return L.pass();
}

// Brute-force kappa_s(v) from the coset sum of mu_0^s(t) Psi(p^v t) over p^{-(v+2)}O / p^{-n}O.
double kappa_oracle(const FieldParams& fp, double s, int v) {
  const int K = v + 2;
  const PAdicScalar pv = PAdicScalar::from_integer(fp.p, static_cast<std::int64_t>(fp.p_pow(v)), kPrec);
  double acc = 0.0;
  for (std::uint64_t c = 0; c < fp.p_pow(K - fp.n); ++c) {
    const PAdicScalar t = c == 0 ? PAdicScalar::zero(fp.p)
                                 : PAdicScalar::from_rational(fp.p, static_cast<std::int64_t>(c),
                                                              static_cast<std::int64_t>(fp.p_pow(K)), kPrec);
    acc += mu0(t, fp).pow(s) * psi(pv * t).real();
  }
  return acc * fp.q_pow(fp.n);
}

bool j_calculus(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  const int mc = closure_scale(fp, c.m, c.N);
  auto J = [&](double s, JRoute r = JRoute::direct) { return j_matrix(fp, s, mc, c.N, r).matrix(); };
  const Eigen::MatrixXd J2 = J(-2.0), J3 = J(-3.0);
  L.le("J^{-2} J^{-2} = J^{-4} (max entry)", (J2 * J2 - J(-4.0)).cwiseAbs().maxCoeff(), 1e-9);
  L.le("J^{-2} J^{-3} = J^{-5} (max entry)", (J2 * J3 - J(-5.0)).cwiseAbs().maxCoeff(), 1e-9);
  L.le("J^{-1.5} J^{-2.5} = J^{-4}, spectral route (max entry)",
       (J(-1.5, JRoute::spectral) * J(-2.5, JRoute::spectral) - J(-4.0)).cwiseAbs().maxCoeff(), 1e-9);
  double eig = 0.0;
  for (std::uint64_t x = 0; x < fp.p_pow(mc); ++x) {
    const Symbol f = character_symbol(fp, theta, mc, c.N, x);
    const PAdicScalar freq = x == 0 ? PAdicScalar::zero(fp.p)
                                    : PAdicScalar::from_rational(fp.p, static_cast<std::int64_t>(x),
                                                                 static_cast<std::int64_t>(fp.p_pow(mc)), kPrec);
    for (double s : {-3.0, -1.5, 2.0})
      eig = std::max(eig, (apply_j(f, s).values() - f.values() * mu0(freq, fp).pow(s)).cwiseAbs().maxCoeff());
  }
  L.le("J^s Psi(x u) = mu_0^s(x) Psi(x u), all x in p^{-m}O / O", eig, 1e-9);
  const double min_eig = j_spectrum(fp, -2.0, mc, c.N).minCoeff();
  L.ok("J^{-2} positive definite (min eigenvalue " + std::to_string(min_eig) + ")", min_eig > 0.0);
  double kappa = 0.0;
  for (double s : {-2.0, -3.0, -2.5}) {
    const KsKernel ks = ks_kernel(fp, s, fp.n + 4);
    for (int v = fp.n; v <= fp.n + 4; ++v) kappa = std::max(kappa, std::abs(ks.value(v) - kappa_oracle(fp, s, v)));
  }
  L.le("kappa_s closed form = coset-sum oracle", kappa, 1e-10);
  double shell = fp.q_pow(fp.n);
  for (int k = fp.n + 1; k < fp.n + 200; ++k) shell += fp.q_pow(-2.0 * (k - fp.n)) * fp.q_pow(k) * (1.0 - 1.0 / fp.p);
  L.le("||mu_0^{-2}||_1 = shell sum", std::abs(mu0_l1_norm(fp, -2.0) - shell), 1e-12);
  if (c.p == 3 && c.n == 1) L.le("||mu_0^{-2}||_1 = 4", std::abs(mu0_l1_norm(fp, -2.0) - 4.0), 1e-12);
  return L.pass();
}

bool operator_norm_bound(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(9000 + c.p * 10 + c.n);
  const double s = -3.0;
  const double constant = fp.q_pow(fp.n) + mu0_l1_norm(fp, s + 1.0);
  if (c.p == 3 && c.n == 1) L.le("q^n + ||mu_0^{-2}||_1 = 7", std::abs(constant - 7.0), 1e-12);
  double worst = 0.0;
  auto certify = [&](const Symbol& f) {
    const CvReport r = cv_certify(f, s);
    worst = std::max(worst, r.opnorm / (constant * r.seminorm));
  };
  for (int k = 0; k < 200; ++k) certify(rng.symbol(fp, theta, c.m, c.N));
  L.le("||Omega(F)|| / (C ||J^3 F||_inf), 200 random symbols", worst, 1.0 + 1e-9);
  worst = 0.0;
  const int mc = closure_scale(fp, c.m, c.N);
  for (std::uint64_t x = 0; x < fp.p_pow(mc); ++x) certify(character_symbol(fp, theta, mc, c.N, x));
  const Symbol zero = Symbol::zeros(fp, theta, c.m, c.N);
  for (Eigen::Index i = 0; i < zero.values().size(); ++i) {
    Symbol d = zero;
    d.values().data()[i] = 1.0;
    certify(d);
  }
  const UnitCosetGrid g(fp, c.m);
  for (std::size_t i = 0; i < g.size(); ++i)
    certify(wigner(ConfigFunction::cell_indicator(g, i), ConfigFunction::cell_indicator(g, (i * 7 + 1) % g.size()), theta));
  L.le("same ratio, characters, cell deltas, rank-one Wigner", worst, 1.0 + 1e-9);

  const WignerL1 l1 = js_wigner_l1(fp, theta, s, std::max(fp.n + 2, c.N));
  L.le("integral |J^{-3} W| over G x X (+ tail bound)", l1.truncated + l1.tail_bound, l1.bound * (1 + 1e-12));
  if (c.p == 3 && c.n == 1) L.le("  that bound equals 7/27", std::abs(l1.bound - 7.0 / 27.0), 1e-12);

  const int Mr = fp.n + 1;
  std::vector<Symbol> small{Symbol::constant(fp, theta, Mr, Mr, 1.0)};
  for (int k = 0; k < 5; ++k) small.push_back(rng.symbol(fp, theta, Mr, Mr));
  double row = 0.0;
  for (const Symbol& f : small) {
    const Inequality r = coefficient_row_bound(f, s);
    row = std::max(row, r.lhs / r.rhs);
  }
  L.le("sup_g1 integral |<pi(g1)1, Omega(F) pi(g2)1>| / bound", row, 1.0 + 1e-9);

  // Pointwise decay with the published constants q^{-3n} and q^{-2n}; the derived ones are listed alongside.
  std::vector<GroupElement> points{GroupElement::identity(fp, kPrec)};
  for (int k = 0; k < 12; ++k) points.push_back(rng.element(fp, c.m, k % (c.N + 2)));
  for (double sv : {-3.0, -4.0}) {
    const std::string tag = "s = " + std::to_string(static_cast<int>(sv));
    const DecayCheck stated = wigner_slice_decay(points, theta, sv, fp.q_pow(-3 * fp.n));
    L.le("integral_X |J^s W_g| / (q^{-3n} omega_{s+1}(g)), " + tag, stated.worst_ratio, 1.0 + 1e-9);
    const DecayCheck derived = wigner_slice_decay(points, theta, sv, fp.q_pow(-2 * fp.n));
    L.info("  with q^{-2n} in place of q^{-3n}, " + tag, derived.worst_ratio, 1.0, derived.holds());
  }
  double stated = 0.0, derived = 0.0;
  for (const Symbol& f : small) {
    stated = std::max(stated, coefficient_decay(f, s, fp.q_pow(-2 * fp.n)).worst_ratio);
    derived = std::max(derived, coefficient_decay(f, s, fp.q_pow(-fp.n)).worst_ratio);
  }
  L.le("|<pi(g1)1, Omega(F) pi(g2)1>| / (q^{-2n} ||J^3F|| omega_{-2}(g1^{-1}g2))", stated, 1.0 + 1e-9);
  L.info("  with q^{-n} in place of q^{-2n}", derived, 1.0, derived <= 1.0 + 1e-9);
  return L.pass();
}

bool reconstruction(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(10000 + c.p * 10 + c.n);
  const int M = fp.n + 1;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Symbol f = rng.symbol(fp, theta, M, M);
    worst = std::max(worst, max_abs_diff(reconstruct_symbol(quantize_direct(f), theta), f));
  }
  L.le("reconstruct(Omega(F)) = F, 20 symbols at (n+1, n+1)", worst, 1e-8);

  const Symbol one = Symbol::constant(fp, theta, M, M, 1.0);
  const ComposeReport r = compose_bounded_check(rng.symbol(fp, theta, M, M), rng.symbol(fp, theta, M, M), -3.0, -3.0);
  L.le("s1 = s2 = -3: F3 symbol = kernel-route star product", r.star_agreement, 1e-9);
  L.le("s1 = s2 = -3: coherent reconstruction of F3 = star product", r.reconstruct_agreement, 1e-8);
  L.ok("s1 = s2 = -3: seminorms ||J^k F3||_inf finite, k = 0..3", r.f3_finite);
  const ComposeReport d = compose_bounded_check(one, one, -4.0, -2.0);
  L.le("(s1, s2) = (-4, -2), F = 1: ratio against 2 q^{-n} constant", d.derived.worst_ratio, 1.0 + 1e-9);
  L.info("  same with the published q^{-3n} constant", d.stated.worst_ratio, 1.0, d.stated.holds());
  return L.pass();
}

bool seminorm_algebra(const Config& c, Ledger& L) {
  const FieldParams fp = c.fp();
  const ThetaParam theta = theta_for(c);
  Random rng(11000 + c.p * 10 + c.n);
  double prod = 0.0, ideal = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Symbol a = rng.symbol(fp, theta, c.m, c.N), b = rng.symbol(fp, theta, c.m, c.N);
    const Inequality pi = product_inequality(a, b, k % 2);
    const Inequality ii = ideal_inequality(a, b, k % 2, (k / 2) % 2);
    prod = std::max(prod, pi.lhs / pi.rhs);
    ideal = std::max(ideal, ii.lhs / ii.rhs);
  }
  L.le("||J^j(F1 F2)|| / (q^{-2n} ||mu_0^{-2}||_1^2 ||J^{j+2}F1|| ||J^{j+2}F2||)", prod, 1.0 + 1e-9);
  L.le("||J^k I^j(f F)|| / (q^{-2n} ||mu_0^{-2}||_1^2 ||J^{k+2}I^j f|| ||J^{k+2}F||)", ideal, 1.0 + 1e-9);
  return L.pass();
}

struct Criterion {
  std::string title;
  double limit_s;  // runtime limit at the reference configuration; 0 for none
  std::function<bool(const Config&, Ledger&)> run;
};

}  // namespace

int main() {
  const std::vector<Config> configs{{3, 1, 3, 2}, {5, 1, 3, 2}, {3, 2, 4, 3}};
  const std::vector<Criterion> criteria{
      {"sigma(u) = u^2 and phi(u) = u - 1/u are isometries of U_n (exhaustive)", 1.0, sigma_phi_isometry},
      {"Fourier unitarity on k and Gamma, transfer and substitution identities", 1.0, fourier_identities},
      {"square integrability constant and coherent-state resolution", 5.0, square_integrability},
      {"||Omega(f)||_HS^2 = q^n ||f||^2 and kernel route equivalence", 10.0, quantization_unitarity},
      {"Omega(W_{phi1,phi2}) = |phi2><phi1| and Omega(1) = Id", 0.0, wigner_inversion},
      {"star product: routes, associativity, trace, covariance, Wigner rule", 30.0, star_product},
      {"pi(g) Omega(f) pi(g)^* = Omega(f^g)", 0.0, covariance},
      {"J^s semigroup, eigenrelation, positivity, kappa_s, ||mu_0^{-2}||_1", 0.0, j_calculus},
      {"||Omega(F)|| <= (q^n + ||mu_0^{s+1}||_1) ||J^{-s}F||_inf, s = -3, with intermediate bounds", 60.0,
       operator_norm_bound},
      {"reconstruction from coherent coefficients and closure under composition", 60.0, reconstruction},
      {"product and ideal inequalities for the J-seminorms", 0.0, seminorm_algebra},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& cr = criteria[i];
    std::printf("[%zu] %s\n", i + 1, cr.title.c_str());
    bool pass = true;
    double reference_seconds = 0.0;
    for (const Config& c : configs) {
      Ledger L(c.tag());
      const auto t0 = std::chrono::steady_clock::now();
      bool ok = false;
      try {
        ok = cr.run(c, L);
      } catch (const std::exception& e) {
        std::printf("    [%s] exception: %s\n", c.tag().c_str(), e.what());
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("    [%s] %.3f s\n", c.tag().c_str(), secs);
      if (c.reference()) reference_seconds = secs;
      pass = pass && ok;
    }
    if (cr.limit_s > 0.0) {
      const bool in_time = reference_seconds < cr.limit_s;
      std::printf("    runtime at reference scale %.3f s, limit %.0f s: %s\n", reference_seconds, cr.limit_s,
                  in_time ? "ok" : "EXCEEDED");
      pass = pass && in_time;
    }
    if (!pass) ++failed;
    std::printf("%s %zu %s\n\n", pass ? "PASS" : "FAIL", i + 1, cr.title.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
