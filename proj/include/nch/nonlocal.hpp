#pragma once

#include <optional>

#include "nch/field.hpp"

namespace nch {

enum class KernelKind { gaussian, tabulated };

/// Describes the interaction kernel J.
///
/// The Gaussian is J(x) = 4 / (pi^{d/2} delta^{d+2}) exp(-|x|^2 / delta^2),
/// normalized so that its free-space integral is 4 / delta^2. It is made
/// periodic by summing lattice images; `image_cutoff < 0` picks the smallest
/// image count whose discarded tail is below `tail_tolerance` of J(0).
struct KernelSpec {
  static constexpr double tail_tolerance = 1e-15;
  static constexpr int max_auto_images = 64;

  KernelKind kind = KernelKind::gaussian;
  double delta = 0.1;
  int image_cutoff = -1;
  /// Grid values for tabulated kernels.
  std::optional<Field> table;
};

/// Free-space Gaussian kernel value at squared distance r2.
double gaussian_kernel(double delta, int dim, double r2);

/// Smallest per-axis image count meeting the tail bound on this grid.
/// Throws KernelCutoffError when none up to max_auto_images does.
int auto_image_cutoff(double delta, const Grid& grid);

/// Grid restriction of the periodized kernel.
Field periodize_kernel(const KernelSpec& spec, const Grid& grid);

/// Discrete J (*) 1 = h^d sum_j J_j.
double conv_one(const Field& kernel);

/// Relative imaginary residue tolerated in the nonlocal eigenvalues.
inline constexpr double kernel_symmetry_tolerance = 1e-10;

/// Eigenvalues of the discrete nonlocal operator,
/// lambda(k) = h^d sum_j J_j (1 - exp(-i k.pi x_j / X)) = h^d N^d (J^(0) - J^(k)).
/// Throws SymmetryError if the kernel is not even (complex eigenvalues).
Symbol nonlocal_symbol(const Field& kernel);

/// Periodic convolution over physical displacements,
/// (f (*) g)(x_i) = h^d sum_m f(x_i - y_m) g(y_m).
Field discrete_convolution(const Field& f, const Field& g);

/// Eigenvalues and J (*) 1 of the discrete nonlocal operator. gamma0 is left
/// unset (NaN) until combined with epsilon by the model.
struct NonlocalOperator {
  Symbol lambda;
  double j_conv_one = 0.0;
  double gamma0 = 0.0;
};

NonlocalOperator build_nonlocal(const KernelSpec& spec, const Grid& grid);

}  // namespace nch
