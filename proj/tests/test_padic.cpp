#include <cmath>
#include <random>

#include "doctest.h"
#include "fuchs/padic.hpp"

using namespace fuchs;

namespace {

// Brute-force inverse modulo p^k.
std::uint64_t inverse_by_search(std::uint64_t a, std::uint64_t mod) {
  for (std::uint64_t x = 1; x < mod; ++x)
    if (a * x % mod == 1) return x;
  return 0;
}

PAdicScalar integer(int p, std::int64_t v, int prec) { return PAdicScalar::from_integer(p, v, prec); }

}  // namespace

TEST_CASE("field parameters reject even and composite primes") {
  CHECK_THROWS_AS(FieldParams::make(2, 1), ParameterError);
  CHECK_THROWS_AS(FieldParams::make(9, 1), ParameterError);
  CHECK_THROWS_AS(FieldParams::make(3, 0), ParameterError);
  CHECK_NOTHROW(FieldParams::make(5, 2));
}

TEST_CASE("valuation and absolute value") {
  const PAdicScalar x = integer(3, 18, 6);
  CHECK(x.valuation() == 2);
  CHECK(x.abs() == doctest::Approx(1.0 / 9.0));
  CHECK((integer(3, 1, 4) + integer(3, -1, 4)).is_zero());
  CHECK((integer(3, 1, 4) + integer(3, -1, 4)).valuation() == PAdicScalar::kInfinity);
}

TEST_CASE("inverse of 4 modulo 27") {
  const PAdicScalar inv = integer(3, 4, 3).inverse();
  CHECK(inv.residue(3) == 7);
  CHECK(inverse_by_search(4, 27) == 7);
  CHECK_THROWS_AS(PAdicScalar::zero(3).inverse(), DomainError);
}

TEST_CASE("inverse agrees with brute-force search for every unit mod 5^3") {
  for (std::uint64_t a = 1; a < 125; ++a) {
    if (a % 5 == 0) continue;
    CHECK(integer(5, static_cast<std::int64_t>(a), 3).inverse().residue(3) == inverse_by_search(a, 125));
  }
}

TEST_CASE("square roots of principal units") {
  const FieldParams fp = FieldParams::make(3, 1);
  const PrincipalUnit four(fp, integer(3, 4, 3));
  const PrincipalUnit r = sqrt_unit(four);
  CHECK(r.residue(3) == 25);
  CHECK(r.value().digits() == std::vector<int>{1, 2, 2});
  CHECK(sqrt_unit(PrincipalUnit::one(fp, 5)).residue(5) == 1);

  const FieldParams fp5 = FieldParams::make(5, 1);
  const PrincipalUnit six(fp5, integer(5, 6, 3));
  std::uint64_t oracle = 0;
  for (std::uint64_t w = 1; w < 125; w += 5)
    if (w * w % 125 == 6) oracle = w;
  CHECK(sqrt_unit(six).residue(3) == oracle);
  CHECK(sqrt_unit(six).residue(2) == 16);
}

TEST_CASE("sqrt needs more than n digits") {
  const FieldParams fp = FieldParams::make(3, 2);
  CHECK_THROWS_AS(sqrt_unit(PrincipalUnit(fp, integer(3, 10, 2))), PrecisionError);
}

TEST_CASE("phi and its inverse") {
  const FieldParams fp = FieldParams::make(3, 1);
  const int L = 8;
  const PrincipalUnit four(fp, integer(3, 4, L));
  const PAdicScalar z = phi(four);
  CHECK(z == PAdicScalar::from_rational(3, 15, 4, L));
  CHECK(z.valuation() == 1);
  CHECK(phi(PrincipalUnit::one(fp, L)).is_zero());
  CHECK((phi(four) - phi(PrincipalUnit(fp, integer(3, 7, L)))).abs() == doctest::Approx(1.0 / 3.0));
  CHECK(phi_inverse(fp, z).value() == four.value());
  CHECK(phi_inverse(fp, PAdicScalar::zero(3)).residue(L) == 1);

  // u - 1/u = 3 mod 27, searched over u = 1 mod 3.
  const PrincipalUnit u = phi_inverse(fp, integer(3, 3, 3));
  std::uint64_t oracle = 0;
  for (std::uint64_t w = 1; w < 27; w += 3)
    if ((w + 27 * 27 - inverse_by_search(w, 27)) % 27 == 3) oracle = w;
  CHECK(u.residue(3) == oracle);
  CHECK_THROWS_AS(phi_inverse(fp, integer(3, 1, L)), DomainError);
}

TEST_CASE("sigma and phi are isometries on U_1 / U_4 (exhaustive)") {
  const FieldParams fp = FieldParams::make(3, 1);
  const int L = 4;
  std::vector<PrincipalUnit> units;
  for (std::uint64_t a = 0; a < 27; ++a) units.push_back(PrincipalUnit::from_residue(fp, 1 + 3 * a, L));
  int checked = 0;
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      const PAdicScalar d = units[i].value() - units[j].value();
      const PAdicScalar ds = square(units[i]).value() - square(units[j]).value();
      const PAdicScalar dp = phi(units[i]) - phi(units[j]);
      REQUIRE(!d.is_zero());
      CHECK(ds.valuation() == d.valuation());
      CHECK(dp.valuation() == d.valuation());
      ++checked;
    }
  CHECK(checked == 27 * 26 / 2);
}

TEST_CASE("sqrt and phi round trips at several levels") {
  for (auto [p, n] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{3, 2}}) {
    const FieldParams fp = FieldParams::make(p, n);
    const int L = n + 4;
    const std::uint64_t count = fp.p_pow(L - n);
    for (std::uint64_t a = 0; a < count; ++a) {
      const PrincipalUnit u = PrincipalUnit::from_residue(fp, 1 + fp.p_pow(n) * a, L);
      CHECK(sqrt_unit(square(u)).value() == u.value());
      CHECK(square(sqrt_unit(u)).value() == u.value());
      CHECK(phi_inverse(fp, phi(u)).value() == u.value());
    }
  }
}

TEST_CASE("fractional parts") {
  const int L = 8;
  CHECK(fractional_part(integer(3, 2, L)).is_zero());
  const CharacterAngle third = fractional_part(PAdicScalar::from_rational(3, 1, 3, L));
  CHECK(third.numerator() == 1);
  CHECK(third.denominator_exponent() == 1);
  const CharacterAngle f = fractional_part(PAdicScalar::from_rational(3, 5, 9, L));
  CHECK(f.numerator() == 5);
  CHECK(f.denominator_exponent() == 2);
  CHECK(f.turns() == doctest::Approx(5.0 / 9.0));
  // 1/3 known to zero digits below the point cannot produce a fractional part.
  CHECK_THROWS_AS(fractional_part(PAdicScalar(3, -2, 1, 1)), PrecisionError);
}

TEST_CASE("psi is a character and the ultrametric law holds on random rationals") {
  std::mt19937_64 rng(7);
  for (int p : {3, 5, 7}) {
    std::uniform_int_distribution<std::int64_t> num(-500, 500), ex(0, 4), co(1, 12);
    for (int k = 0; k < 300; ++k) {
      auto draw = [&] {
        const std::int64_t a = num(rng);
        const auto den = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(p), static_cast<int>(ex(rng)))) * co(rng);
        return a == 0 ? PAdicScalar::zero(p) : PAdicScalar::from_rational(p, a, den, 12);
      };
      const PAdicScalar x = draw(), y = draw();
      CHECK((x + y).abs() <= std::max(x.abs(), y.abs()));
      CHECK((x * y).abs() == doctest::Approx(x.abs() * y.abs()));
      CHECK(fractional_part(x + y) == fractional_part(x) + fractional_part(y));
      const std::complex<double> lhs = psi(x + y), rhs = psi(x) * psi(y);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("mu_0 values, invariances and the Peetre inequality") {
  const FieldParams fp = FieldParams::make(3, 1);
  const int L = 10;
  CHECK(mu0(integer(3, 3, L), fp).value() == 1.0);
  CHECK(mu0(PAdicScalar::from_rational(3, 1, 9, L), fp).value() == 3.0);
  CHECK(mu0(PAdicScalar::zero(3), fp).value() == 1.0);
  const PAdicScalar a = PAdicScalar::from_rational(3, 1, 9, L), b = PAdicScalar::from_rational(3, 1, 3, L);
  CHECK(mu0(a + b, fp).value() <= mu0(a, fp).value() * mu0(b, fp).value());

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(1, 2000), ex(0, 5), ua(0, 80);
  for (int k = 0; k < 300; ++k) {
    const PAdicScalar t = PAdicScalar::from_rational(3, num(rng), static_cast<std::int64_t>(ipow(3, static_cast<int>(ex(rng)))), L);
    const PAdicScalar s = PAdicScalar::from_rational(3, num(rng), static_cast<std::int64_t>(ipow(3, static_cast<int>(ex(rng)))), L);
    const PAdicScalar u = integer(3, 1 + 3 * ua(rng), L);
    const PAdicScalar x = PAdicScalar::from_rational(3, num(rng), 3, L);
    CHECK(mu0(u * t, fp).value() == mu0(t, fp).value());
    CHECK(mu0(t + x, fp).value() == mu0(t, fp).value());
    CHECK(mu0(t + s, fp).value() <= mu0(t, fp).value() * mu0(s, fp).value());
  }
}

TEST_CASE("residue ring square roots and phi inverse agree with the scalar versions") {
  const FieldParams fp = FieldParams::make(5, 1);
  ResidueRing ring(5, 4);
  for (std::uint64_t a = 0; a < 125; ++a) {
    const std::uint64_t u = 1 + 5 * a;
    const PrincipalUnit pu = PrincipalUnit::from_residue(fp, u, 4);
    CHECK(ring.sqrt_unit(u, 1) == sqrt_unit(pu).residue(4));
    CHECK(ring.phi(u) == phi(pu).residue(4));
    CHECK(ring.phi_inverse(ring.phi(u), 1) == u);
  }
  CHECK_THROWS_AS(ring.sqrt_unit(2, 1), DomainError);
  CHECK_THROWS_AS(ring.inv(10), DomainError);
}
