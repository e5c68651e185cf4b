#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "nch/grid.hpp"

namespace nch {

using Complex = std::complex<double>;
/// Signed wavenumber multi-index (k_0, k_1, k_2); unused axes are 0.
using ModeIndex = std::array<long, 3>;

/// Real grid function on a periodic grid.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples `fn(x)` at every node; x holds the physical coordinates.
  static Field from_function(const Grid& grid,
                             const std::function<double(const std::array<double, 3>&)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Discrete Fourier coefficients over the full index set
/// -N_i/2+1 <= k_i <= N_i/2, stored in FFT order (k >= 0 first, then the
/// negative wavenumbers).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex& at(const ModeIndex& k);
  const Complex& at(const ModeIndex& k) const;

  /// Flat FFT-order offset of a mode; k is reduced modulo N_i.
  std::size_t offset(const ModeIndex& k) const;
  /// Mode held at a flat FFT-order offset.
  ModeIndex mode(std::size_t offset) const;

  /// max_k |F(k) - conj(F(-k))|.
  double symmetry_defect() const;

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Real per-mode eigenvalues of a diagonal, real-symmetric operator.
///
/// Symbols satisfy s(k) = s(-k), so only the real-to-complex half spectrum
/// (last axis 0..N/2) is stored; `at` folds the negative last-axis modes.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(const Grid& grid, double fill = 0.0);

  /// Builds s(k) from a function of the signed mode index.
  static Symbol from_modes(const Grid& grid, const std::function<double(const ModeIndex&)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double at(const ModeIndex& k) const;
  double max_abs() const;

  /// Signed mode index for each stored half-spectrum entry.
  ModeIndex mode(std::size_t half_offset) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Signed mode of a half-spectrum offset (last axis non-negative).
ModeIndex half_mode(const Grid& grid, std::size_t half_offset);

}  // namespace nch
