#pragma once

#include <span>

#include "nch/field.hpp"

namespace nch {

/// Imaginary residue allowed after an inverse transform, relative to the
/// l-infinity norm of the real part.
inline constexpr double imaginary_residue_tolerance = 1e-10;
/// |mean| allowed for a field treated as zero-mean, relative to its l-infinity norm.
inline constexpr double zero_mean_tolerance = 1e-12;

/// Discrete Fourier coefficients with physical phases,
/// F(k) = N^-d * sum_j f_j exp(-i k.pi x_j / X).
SpectralField to_spectral(const Field& f);

/// Inverse of to_spectral. Throws SymmetryError when the coefficients are not
/// the transform of a real field (imaginary residue above tolerance).
Field to_physical(const SpectralField& coeffs);

/// Eigenvalues of the collocation Laplacian, -sum_i (k_i pi / X_i)^2.
/// Nyquist modes are kept.
Symbol laplacian_symbol(const Grid& grid);

/// Spectral first derivative along one axis; the Nyquist mode is zeroed.
Field derivative(const Field& f, int axis);

/// to_physical(S * to_spectral(f)) for a diagonal operator.
Field apply_symbol(const Symbol& symbol, const Field& f);

/// Deterministic pairwise sum.
double pairwise_sum(std::span<const double> values);

/// h^d * sum f g
double inner(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_linf(const Field& f);
double mean(const Field& f);

/// (-Delta_N)^{-1} f for zero-mean f (zero mode mapped to zero).
/// Throws MeanError if f is not zero-mean within tolerance.
Field inverse_neg_laplacian(const Field& f);

/// ||(-Delta_N)^{-1/2} f||_2 on zero-mean fields; throws MeanError otherwise.
double norm_hm1(const Field& f);

}  // namespace nch
