#pragma once

// Finite coset grids for U_n, Gamma_n = k / p^{-n}O and k itself, with the
// Haar normalisations Vol(O) = 1, and the Fourier transforms between them.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "fuchs/padic.hpp"

namespace fuchs {

using cplx = std::complex<double>;

// U_n / U_m with representatives 1 + p^n a (a = 0 .. p^{m-n} - 1), cell volume p^{-m}.
class UnitCosetGrid {
 public:
  UnitCosetGrid(const FieldParams& params, int scale);

  const FieldParams& params() const { return params_; }
  int scale() const { return scale_; }
  std::size_t size() const { return size_; }
  std::uint64_t modulus() const { return modulus_; }
  double cell_volume() const { return cell_volume_; }

  std::uint64_t rep(std::size_t i) const { return 1 + step_ * i; }
  // Index of the cell containing a unit given as a residue modulo p^k, k >= scale.
  std::size_t index_of(std::uint64_t residue) const;
  // Index of the ancestor cell at a coarser scale.
  std::size_t parent(std::size_t i, int coarse_scale) const;
  PrincipalUnit unit(std::size_t i, int precision) const;
  ResidueRing ring() const { return ResidueRing(params_.p, scale_); }

  friend bool operator==(const UnitCosetGrid& a, const UnitCosetGrid& b) {
    return a.params_ == b.params_ && a.scale_ == b.scale_;
  }

 private:
  FieldParams params_;
  int scale_;
  std::size_t size_;
  std::uint64_t modulus_;
  std::uint64_t step_;
  double cell_volume_;
};

// Classes [t] of p^{-N}O / p^{-n}O, t = b / p^N for b = 0 .. p^{N-n} - 1; counting measure.
class GammaGrid {
 public:
  GammaGrid(const FieldParams& params, int cutoff);

  const FieldParams& params() const { return params_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return size_; }

  // t_b as a p-adic number; numerator b over p^N.
  PAdicScalar rep(std::size_t b, int precision) const;
  // Index of [t], or size() when [t] lies outside the grid.
  std::size_t index_of(const PAdicScalar& t) const;
  // [u t] for a unit residue u (modulo p^k, k >= N - n): an exact permutation of the grid.
  std::size_t dilate(std::size_t b, std::uint64_t unit_residue) const;

 private:
  FieldParams params_;
  int cutoff_;
  std::size_t size_;
};

// p^n O / p^N O, the dual of GammaGrid under (z, [t]) -> Psi(z t); z_c = p^n c.
// Point weight p^{n-N} gives total mass 1.
class DualGrid {
 public:
  DualGrid(const FieldParams& params, int cutoff);
  std::size_t size() const { return size_; }
  std::uint64_t point(std::size_t c) const { return params_.p_pow(params_.n) * c; }
  double weight() const { return weight_; }

 private:
  FieldParams params_;
  int cutoff_;
  std::size_t size_;
  double weight_;
};

// p^a O / p^b O inside k (a <= b): points p^a c, cell volume p^{-b}.
struct KGrid {
  int p = 3;
  int a = 0;
  int b = 0;

  KGrid(int p, int a, int b);
  std::size_t size() const { return static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(p), b - a)); }
  double cell_volume() const;
  PAdicScalar point(std::size_t c, int precision) const;
  // Index of the cell containing t, or size() if t lies outside p^a O.
  std::size_t index_of(const PAdicScalar& t) const;
};

// Locally constant compactly supported function on k.
struct KFunction {
  KGrid grid;
  Eigen::VectorXcd values;

  double norm2() const { return values.squaredNorm() * grid.cell_volume(); }
};

// Function on U_n constant on U_m cosets.
class ConfigFunction {
 public:
  ConfigFunction(UnitCosetGrid grid, Eigen::VectorXcd values);

  static ConfigFunction zeros(const UnitCosetGrid& grid);
  static ConfigFunction constant(const UnitCosetGrid& grid, cplx value);
  static ConfigFunction cell_indicator(const UnitCosetGrid& grid, std::size_t i);

  const UnitCosetGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  int scale() const { return grid_.scale(); }

  cplx at(std::uint64_t unit_residue) const { return values_(grid_.index_of(unit_residue)); }
  double norm2() const { return values_.squaredNorm() * grid_.cell_volume(); }
  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  ConfigFunction refined(int scale) const;
  ConfigFunction conjugate() const { return ConfigFunction(grid_, values_.conjugate()); }

 private:
  UnitCosetGrid grid_;
  Eigen::VectorXcd values_;
};

// <a, b> = integral of conj(a) b over U_n, at the finer of the two scales.
cplx inner(const ConfigFunction& a, const ConfigFunction& b);

// (F_k f)(s) = integral f(t) Psi(s t) dt. Output lives on KGrid(-b, -a).
KFunction fourier_k(const KFunction& f);
KFunction inverse_fourier_k(const KFunction& f);

// (F_Gamma f)(z) = sum_[t] f([t]) Psi(z t) on DualGrid(cutoff).
Eigen::VectorXcd fourier_gamma(const GammaGrid& grid, const Eigen::VectorXcd& f);
Eigen::VectorXcd inverse_fourier_gamma(const GammaGrid& grid, const Eigen::VectorXcd& fhat);

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
};

// integral f(u^2) du against integral f(u) du on U_n.
IdentityCheck square_substitution(const ConfigFunction& f);
// integral h(u - u^{-1}) du over U_n against integral h(x) dx over p^n O; h given on
// p^n O / p^m O (index c for x = p^n c).
IdentityCheck phi_substitution(const FieldParams& params, int scale, const Eigen::VectorXcd& h);

}  // namespace fuchs
