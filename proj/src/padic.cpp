#include "fuchs/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fuchs {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

void require_same_prime(const PAdicScalar& a, const PAdicScalar& b) {
  if (a.prime() != b.prime()) throw ParameterError("p-adic operands over different primes");
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int max_precision(int p) {
  int k = 0;
  u128 acc = 1;
  while (acc * static_cast<u128>(p) < (u128{1} << 62)) {
    acc *= static_cast<u128>(p);
    ++k;
  }
  return k;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  if (exp < 0) throw DomainError("ipow: negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int valuation_of(std::int64_t value, int p) {
  if (value == 0) return PAdicScalar::kInfinity;
  int v = 0;
  while (value % p == 0) {
    value /= p;
    ++v;
  }
  return v;
}

FieldParams FieldParams::make(int p, int n) {
  if (p == 2)
    throw ParameterError(
        "p = 2 is excluded: the residue characteristic must be odd so that 2 is a unit");
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (n < 1) throw ParameterError("level n must be >= 1");
  if (n >= max_precision(p)) throw ParameterError("level n exceeds the representable precision");
  return FieldParams{p, n};
}

double FieldParams::q_pow(double e) const { return std::pow(static_cast<double>(p), e); }

// ---------------------------------------------------------------- ResidueRing

ResidueRing::ResidueRing(int p, int k) : p_(p), k_(k) {
  if (k < 0 || k > max_precision(p)) throw PrecisionError("residue ring exponent out of range");
  mod_ = ipow(static_cast<std::uint64_t>(p), k);
}

std::uint64_t ResidueRing::reduce(std::int64_t a) const {
  auto m = static_cast<std::int64_t>(mod_);
  std::int64_t r = a % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t ResidueRing::add(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>((static_cast<u128>(a) + b) % mod_);
}

std::uint64_t ResidueRing::sub(std::uint64_t a, std::uint64_t b) const {
  return add(a % mod_, mod_ - (b % mod_));
}

std::uint64_t ResidueRing::neg(std::uint64_t a) const { return (mod_ - a % mod_) % mod_; }

std::uint64_t ResidueRing::mul(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % mod_);
}

std::uint64_t ResidueRing::inv(std::uint64_t a) const {
  if (mod_ == 1) return 0;
  if (a % static_cast<std::uint64_t>(p_) == 0) throw DomainError("inverse of a non-unit residue");
  i128 r0 = static_cast<i128>(mod_), r1 = static_cast<i128>(a % mod_);
  i128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  i128 m = static_cast<i128>(mod_);
  s0 %= m;
  if (s0 < 0) s0 += m;
  return static_cast<std::uint64_t>(s0);
}

std::uint64_t ResidueRing::sqrt_unit(std::uint64_t u, int n) const {
  u %= mod_;
  const std::uint64_t level = ipow(static_cast<std::uint64_t>(p_), std::min(n, k_));
  if (u % level != 1 % level) throw DomainError("sqrt_unit: argument is not in U_n");
  std::uint64_t x = 1 % mod_;
  for (int iter = 0; iter < 128; ++iter) {
    std::uint64_t f = sub(mul(x, x), u);
    if (f == 0) return x;
    x = sub(x, mul(f, inv(add(x, x))));
  }
  throw PrecisionError("sqrt_unit: Newton iteration did not stabilise");
}

std::uint64_t ResidueRing::phi(std::uint64_t u) const { return sub(u, inv(u)); }

std::uint64_t ResidueRing::phi_inverse(std::uint64_t z, int n) const {
  z %= mod_;
  const std::uint64_t level = ipow(static_cast<std::uint64_t>(p_), std::min(n, k_));
  if (z % level != 0) throw DomainError("phi_inverse: argument has valuation below n");
  std::uint64_t u = 1 % mod_;
  for (int iter = 0; iter < 128; ++iter) {
    std::uint64_t h = sub(sub(mul(u, u), mul(z, u)), 1);
    if (h == 0) return u;
    u = sub(u, mul(h, inv(sub(add(u, u), z))));
  }
  throw PrecisionError("phi_inverse: Newton iteration did not stabilise");
}

// ---------------------------------------------------------------- CharacterAngle

CharacterAngle::CharacterAngle(int p, std::uint64_t num, int k) : p_(p), num_(num), k_(k) {
  if (k < 0) throw DomainError("character angle with negative exponent");
  num_ %= ipow(static_cast<std::uint64_t>(p), k);
  while (k_ > 0 && num_ % static_cast<std::uint64_t>(p_) == 0) {
    num_ /= static_cast<std::uint64_t>(p_);
    --k_;
  }
  if (num_ == 0) k_ = 0;
}

double CharacterAngle::turns() const {
  return static_cast<double>(num_) / static_cast<double>(ipow(static_cast<std::uint64_t>(p_), k_));
}

std::complex<double> CharacterAngle::value() const {
  if (num_ == 0) return {1.0, 0.0};
  const std::uint64_t den = ipow(static_cast<std::uint64_t>(p_), k_);
  // Reduce to (-1/2, 1/2] turns before scaling by 2 pi.
  long double x = static_cast<long double>(num_) / static_cast<long double>(den);
  if (x > 0.5L) x -= 1.0L;
  const long double angle = 2.0L * std::numbers::pi_v<long double> * x;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

CharacterAngle CharacterAngle::operator+(const CharacterAngle& other) const {
  if (other.num_ == 0) return *this;
  if (num_ == 0) return other;
  if (p_ != other.p_) throw ParameterError("character angles over different primes");
  const int k = std::max(k_, other.k_);
  ResidueRing ring(p_, k);
  const std::uint64_t a = ring.mul(num_, ipow(static_cast<std::uint64_t>(p_), k - k_));
  const std::uint64_t b = ring.mul(other.num_, ipow(static_cast<std::uint64_t>(p_), k - other.k_));
  return CharacterAngle(p_, ring.add(a, b), k);
}

CharacterAngle CharacterAngle::operator-() const {
  if (num_ == 0) return *this;
  return CharacterAngle(p_, ipow(static_cast<std::uint64_t>(p_), k_) - num_, k_);
}

RootTable::RootTable(int p, int k) {
  const std::uint64_t size = ipow(static_cast<std::uint64_t>(p), k);
  table_.resize(size);
  for (std::uint64_t j = 0; j < size; ++j) table_[j] = CharacterAngle(p, j, k).value();
}

// ---------------------------------------------------------------- PAdicScalar

PAdicScalar::PAdicScalar(int p, int valuation, std::uint64_t mantissa, int precision) : p_(p) {
  if (p < 2 || !is_prime(p)) throw ParameterError("PAdicScalar over a non-prime");
  if (precision < 1) throw PrecisionError("p-adic value known to 0 digits");
  precision = std::min(precision, max_precision(p));
  mantissa %= ipow(static_cast<std::uint64_t>(p), precision);
  if (mantissa == 0) return;  // zero
  const auto up = static_cast<std::uint64_t>(p);
  while (mantissa % up == 0) {
    mantissa /= up;
    ++valuation;
    --precision;
  }
  val_ = valuation;
  mant_ = mantissa;
  prec_ = precision;
}

PAdicScalar PAdicScalar::zero(int p) {
  PAdicScalar z;
  z.p_ = p;
  return z;
}

PAdicScalar PAdicScalar::from_integer(int p, std::int64_t value, int precision) {
  if (value == 0) return zero(p);
  const int v = valuation_of(value, p);
  std::int64_t rest = value;
  for (int i = 0; i < v; ++i) rest /= p;
  precision = std::min(precision, max_precision(p));
  ResidueRing ring(p, precision);
  return PAdicScalar(p, v, ring.reduce(rest), precision);
}

PAdicScalar PAdicScalar::from_rational(int p, std::int64_t num, std::int64_t den, int precision) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (num == 0) return zero(p);
  int v = 0;
  while (num % p == 0) {
    num /= p;
    ++v;
  }
  while (den % p == 0) {
    den /= p;
    --v;
  }
  precision = std::min(precision, max_precision(p));
  ResidueRing ring(p, precision);
  return PAdicScalar(p, v, ring.mul(ring.reduce(num), ring.inv(ring.reduce(den))), precision);
}

PAdicScalar PAdicScalar::from_digits(int p, int valuation, std::span<const int> digits) {
  if (digits.empty()) throw PrecisionError("digit list is empty");
  const int precision = static_cast<int>(digits.size());
  if (precision > max_precision(p)) throw PrecisionError("digit list exceeds the working precision");
  std::uint64_t m = 0, scale = 1;
  for (int d : digits) {
    if (d < 0 || d >= p) throw DomainError("digit out of range");
    m += static_cast<std::uint64_t>(d) * scale;
    scale *= static_cast<std::uint64_t>(p);
  }
  if (m == 0) return zero(p);
  return PAdicScalar(p, valuation, m, precision);
}

double PAdicScalar::abs() const {
  if (is_zero()) return 0.0;
  return std::pow(static_cast<double>(p_), -static_cast<double>(val_));
}

std::vector<int> PAdicScalar::digits() const {
  std::vector<int> out;
  std::uint64_t m = mant_;
  for (int i = 0; i < prec_; ++i) {
    out.push_back(static_cast<int>(m % static_cast<std::uint64_t>(p_)));
    m /= static_cast<std::uint64_t>(p_);
  }
  return out;
}

std::uint64_t PAdicScalar::scaled_residue(int shift, int k) const {
  if (is_zero() || k <= 0) return 0;
  const int v = val_ + shift;
  if (v < 0) throw DomainError("residue of a non-integral p-adic value");
  if (v >= k) return 0;
  if (v + prec_ < k)
    throw PrecisionError("residue mod p^" + std::to_string(k) + " needs more digits than known");
  ResidueRing ring(p_, k);
  return ring.mul(mant_, ipow(static_cast<std::uint64_t>(p_), v));
}

std::uint64_t PAdicScalar::residue(int k) const { return scaled_residue(0, k); }

PAdicScalar PAdicScalar::with_precision(int precision) const {
  if (is_zero()) return *this;
  return PAdicScalar(p_, val_, mant_, std::min(precision, prec_));
}

PAdicScalar PAdicScalar::operator-() const {
  if (is_zero()) return *this;
  ResidueRing ring(p_, prec_);
  return PAdicScalar(p_, val_, ring.neg(mant_), prec_);
}

PAdicScalar PAdicScalar::operator+(const PAdicScalar& other) const {
  require_same_prime(*this, other);
  if (other.is_zero()) return *this;
  if (is_zero()) return other;
  const int v = std::min(val_, other.val_);
  const int abs_prec = std::min(absolute_precision(), other.absolute_precision());
  const int digits = abs_prec - v;
  if (digits < 1) throw PrecisionError("sum known to 0 digits");
  ResidueRing ring(p_, digits);
  auto shifted = [&](const PAdicScalar& x) {
    const int s = x.val_ - v;
    if (s >= digits) return std::uint64_t{0};
    return ring.mul(x.mant_, ipow(static_cast<std::uint64_t>(p_), s));
  };
  const std::uint64_t sum = ring.add(shifted(*this), shifted(other));
  if (sum == 0) return zero(p_);
  return PAdicScalar(p_, v, sum, digits);
}

PAdicScalar PAdicScalar::operator*(const PAdicScalar& other) const {
  require_same_prime(*this, other);
  if (is_zero() || other.is_zero()) return zero(p_);
  const int prec = std::min(prec_, other.prec_);
  ResidueRing ring(p_, prec);
  return PAdicScalar(p_, val_ + other.val_, ring.mul(mant_, other.mant_), prec);
}

PAdicScalar PAdicScalar::inverse() const {
  if (is_zero()) throw DomainError("inversion of zero");
  ResidueRing ring(p_, prec_);
  return PAdicScalar(p_, -val_, ring.inv(mant_), prec_);
}

bool operator==(const PAdicScalar& a, const PAdicScalar& b) {
  if (a.p_ != b.p_) return false;
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (a.val_ != b.val_) return false;
  const std::uint64_t mod = ipow(static_cast<std::uint64_t>(a.p_), std::min(a.prec_, b.prec_));
  return a.mant_ % mod == b.mant_ % mod;
}

std::string PAdicScalar::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os << p_ << "^" << val_ << "*[";
  const auto d = digits();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- PrincipalUnit

PrincipalUnit::PrincipalUnit(const FieldParams& params, const PAdicScalar& u) : params_(params), u_(u) {
  if (u.prime() != params.p) throw ParameterError("principal unit over a different prime");
  if (u.is_zero() || u.valuation() != 0) throw DomainError("principal unit must have valuation 0");
  if (u.precision() < params.n) throw PrecisionError("principal unit known to fewer than n digits");
  if (u.residue(params.n) != 1 % params.p_pow(params.n))
    throw DomainError("value is not congruent to 1 mod p^n");
}

PrincipalUnit PrincipalUnit::one(const FieldParams& params, int precision) {
  return PrincipalUnit(params, PAdicScalar::from_integer(params.p, 1, precision));
}

PrincipalUnit PrincipalUnit::from_residue(const FieldParams& params, std::uint64_t residue,
                                          int precision) {
  return PrincipalUnit(params, PAdicScalar(params.p, 0, residue, precision));
}

PrincipalUnit PrincipalUnit::operator*(const PrincipalUnit& other) const {
  return PrincipalUnit(params_, u_ * other.u_);
}

PrincipalUnit PrincipalUnit::inverse() const { return PrincipalUnit(params_, u_.inverse()); }

PrincipalUnit square(const PrincipalUnit& u) { return u * u; }

PrincipalUnit sqrt_unit(const PrincipalUnit& u) {
  const FieldParams& fp = u.params();
  const int L = u.precision();
  if (L < fp.n + 1) throw PrecisionError("sqrt_unit needs at least n + 1 digits");
  ResidueRing ring(fp.p, L);
  return PrincipalUnit::from_residue(fp, ring.sqrt_unit(u.residue(L), fp.n), L);
}

PAdicScalar phi(const PrincipalUnit& u) { return u.value() - u.value().inverse(); }

PrincipalUnit phi_inverse(const FieldParams& params, const PAdicScalar& z, int precision) {
  if (z.prime() != params.p) throw ParameterError("phi_inverse over a different prime");
  const int cap = precision > 0 ? precision : max_precision(params.p);
  if (z.is_zero()) return PrincipalUnit::one(params, cap);
  if (z.valuation() < params.n) throw DomainError("phi_inverse: valuation(z) < n");
  const int L = std::min(cap, z.absolute_precision());
  ResidueRing ring(params.p, L);
  return PrincipalUnit::from_residue(params, ring.phi_inverse(z.residue(L), params.n), L);
}

CharacterAngle fractional_part(const PAdicScalar& t) {
  if (t.is_zero() || t.valuation() >= 0) return CharacterAngle(t.prime(), 0, 0);
  if (t.absolute_precision() < 0)
    throw PrecisionError("fractional part needs the digits down to index -1");
  const int k = -t.valuation();
  return CharacterAngle(t.prime(), t.mantissa() % ipow(static_cast<std::uint64_t>(t.prime()), k), k);
}

double Mu0::value() const { return std::pow(static_cast<double>(p), exponent); }

double Mu0::pow(double s) const {
  return std::pow(static_cast<double>(p), static_cast<double>(exponent) * s);
}

Mu0 mu0_from_valuation(int val, const FieldParams& params) {
  if (val == PAdicScalar::kInfinity) return Mu0{params.p, 0};
  return Mu0{params.p, std::max(0, -params.n - val)};
}

Mu0 mu0(const PAdicScalar& t, const FieldParams& params) {
  return mu0_from_valuation(t.valuation(), params);
}

}  // namespace fuchs
