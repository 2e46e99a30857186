#pragma once

// Exact arithmetic in Q_p (p odd) at fixed digit precision.
//
// A nonzero PAdicScalar is p^v * mantissa, known modulo p^(v + precision).
// Zero is canonical and carries no precision. Hot loops elsewhere in the
// library work directly with residues modulo p^k through ResidueRing.

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuchs {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::int64_t n);

// Largest k with p^k < 2^62, the ceiling on any working precision.
int max_precision(int p);

std::uint64_t ipow(std::uint64_t base, int exp);

// p-adic valuation of a nonzero integer.
int valuation_of(std::int64_t value, int p);

struct FieldParams {
  int p = 3;
  int n = 1;

  // Throws ParameterError unless p is an odd prime and n >= 1.
  static FieldParams make(int p, int n);

  double q_pow(double e) const;
  std::uint64_t p_pow(int e) const { return ipow(static_cast<std::uint64_t>(p), e); }

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

// Arithmetic in Z / p^k Z.
class ResidueRing {
 public:
  ResidueRing(int p, int k);

  int prime() const { return p_; }
  int exponent() const { return k_; }
  std::uint64_t modulus() const { return mod_; }

  std::uint64_t reduce(std::int64_t a) const;
  std::uint64_t reduce_u(std::uint64_t a) const { return a % mod_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  // Inverse of a unit; throws DomainError when p divides a.
  std::uint64_t inv(std::uint64_t a) const;

  // Unique square root w = 1 mod p^n of u = 1 mod p^n (Newton iteration).
  std::uint64_t sqrt_unit(std::uint64_t u, int n) const;
  // u - u^{-1}.
  std::uint64_t phi(std::uint64_t u) const;
  // Unique u = 1 mod p^n with u - u^{-1} = z, for z = 0 mod p^n (Newton on u^2 - zu - 1).
  std::uint64_t phi_inverse(std::uint64_t z, int n) const;

 private:
  int p_;
  int k_;
  std::uint64_t mod_;
};

// num / p^k modulo 1, kept reduced (p does not divide num unless num == 0).
class CharacterAngle {
 public:
  CharacterAngle() = default;
  CharacterAngle(int p, std::uint64_t num, int k);

  int prime() const { return p_; }
  std::uint64_t numerator() const { return num_; }
  int denominator_exponent() const { return k_; }
  bool is_zero() const { return num_ == 0; }

  double turns() const;
  std::complex<double> value() const;

  CharacterAngle operator+(const CharacterAngle& other) const;
  CharacterAngle operator-() const;
  CharacterAngle operator-(const CharacterAngle& other) const { return *this + (-other); }

  friend bool operator==(const CharacterAngle& a, const CharacterAngle& b) {
    return a.num_ == b.num_ && a.k_ == b.k_;
  }

 private:
  int p_ = 3;
  std::uint64_t num_ = 0;
  int k_ = 0;
};

// exp(2 pi i j / p^k) for j in [0, p^k), evaluated once per table.
class RootTable {
 public:
  RootTable(int p, int k);
  const std::complex<double>& operator()(std::uint64_t j) const { return table_[j % table_.size()]; }
  std::uint64_t modulus() const { return table_.size(); }

 private:
  std::vector<std::complex<double>> table_;
};

class PAdicScalar {
 public:
  static constexpr int kInfinity = std::numeric_limits<int>::max();

  PAdicScalar() = default;  // zero for p = 3
  // p^valuation * mantissa known to `precision` digits; mantissa may carry factors of p.
  PAdicScalar(int p, int valuation, std::uint64_t mantissa, int precision);

  static PAdicScalar zero(int p);
  static PAdicScalar from_integer(int p, std::int64_t value, int precision);
  static PAdicScalar from_rational(int p, std::int64_t num, std::int64_t den, int precision);
  // Little-endian digits d_0, d_1, ... of p^{-valuation} x; precision = digits.size().
  static PAdicScalar from_digits(int p, int valuation, std::span<const int> digits);

  int prime() const { return p_; }
  bool is_zero() const { return val_ == kInfinity; }
  int valuation() const { return val_; }
  std::uint64_t mantissa() const { return mant_; }
  int precision() const { return prec_; }
  // The value is known modulo p^absolute_precision().
  int absolute_precision() const { return is_zero() ? kInfinity : val_ + prec_; }
  double abs() const;
  std::vector<int> digits() const;

  // x mod p^k for x in Z_p. Throws DomainError if val < 0, PrecisionError if unknown.
  std::uint64_t residue(int k) const;
  // (x * p^shift) mod p^k; requires val + shift >= 0.
  std::uint64_t scaled_residue(int shift, int k) const;

  PAdicScalar with_precision(int precision) const;

  PAdicScalar operator-() const;
  PAdicScalar operator+(const PAdicScalar& other) const;
  PAdicScalar operator-(const PAdicScalar& other) const { return *this + (-other); }
  PAdicScalar operator*(const PAdicScalar& other) const;
  PAdicScalar inverse() const;

  // Equality of known digits: same valuation and mantissas agree to the shorter precision.
  friend bool operator==(const PAdicScalar& a, const PAdicScalar& b);

  std::string to_string() const;

 private:
  int p_ = 3;
  int val_ = kInfinity;
  std::uint64_t mant_ = 0;
  int prec_ = 0;
};

class PrincipalUnit {
 public:
  // Throws DomainError unless u has valuation 0 and u = 1 mod p^n.
  PrincipalUnit(const FieldParams& params, const PAdicScalar& u);

  static PrincipalUnit one(const FieldParams& params, int precision);
  static PrincipalUnit from_residue(const FieldParams& params, std::uint64_t residue, int precision);

  const FieldParams& params() const { return params_; }
  const PAdicScalar& value() const { return u_; }
  int precision() const { return u_.precision(); }
  std::uint64_t residue(int k) const { return u_.residue(k); }

  PrincipalUnit operator*(const PrincipalUnit& other) const;
  PrincipalUnit inverse() const;

 private:
  FieldParams params_;
  PAdicScalar u_;
};

PrincipalUnit square(const PrincipalUnit& u);
PrincipalUnit sqrt_unit(const PrincipalUnit& u);
PAdicScalar phi(const PrincipalUnit& u);
PrincipalUnit phi_inverse(const FieldParams& params, const PAdicScalar& z, int precision = 0);

CharacterAngle fractional_part(const PAdicScalar& t);
inline std::complex<double> psi(const PAdicScalar& t) { return fractional_part(t).value(); }

// mu_0(t) = max(1, |p^n t|) = p^exponent.
struct Mu0 {
  int p = 3;
  int exponent = 0;
  double value() const;
  double pow(double s) const;
};
Mu0 mu0(const PAdicScalar& t, const FieldParams& params);
// Same weight from the valuation alone; kInfinity means t = 0.
Mu0 mu0_from_valuation(int val, const FieldParams& params);

}  // namespace fuchs
