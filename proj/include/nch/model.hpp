#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nch/fft.hpp"
#include "nch/field.hpp"
#include "nch/nonlocal.hpp"

namespace nch {

struct ModelParams {
  double epsilon = 0.1;
  /// Stabilizer moved into the exactly integrated linear part.
  double kappa = 2.0;
  KernelSpec kernel;
  /// Abort (true) or warn (false) when gamma0 <= 0.
  bool strict_gamma0 = true;
  /// Evaluate the cubic term on a 3/2-padded grid.
  bool dealias = false;
};

/// Immutable problem definition: grid, parameters and precomputed symbols.
struct Problem {
  Grid grid;
  ModelParams params;
  Symbol lap_symbol;
  NonlocalOperator nonlocal;
  /// mu_k (eps^2 lambda_k + kappa) with mu_k = -lap_symbol(k).
  Symbol lh_symbol;
};

/// Builds all symbols and checks gamma0 = eps^2 (J (*) 1) - 1 > 0.
/// Throws GammaZeroError in strict mode when the check fails; otherwise the
/// violation is reported on std::clog.
Problem build_problem(const Grid& grid, const ModelParams& params);

/// F(u) = (u^2 - 1)^2 / 4
inline double double_well(double u) {
  const double w = u * u - 1.0;
  return 0.25 * w * w;
}

/// f(u) = F'(u) = u^3 - u, pointwise.
Field double_well_prime(const Field& u);
/// f_kappa(u) = f(u) - kappa u, pointwise.
Field stabilized_nonlinearity(const Field& u, double kappa);

/// Discrete free energy h^d sum F(u) + (eps^2/2) <L_N u, u>.
double energy(const Field& u, const Problem& problem);
/// h^d sum u
double mass(const Field& u);

/// Forward transform of f_kappa(u), raw (unnormalized) half spectrum on the
/// problem grid, computed plainly on the collocation grid or with 3/2
/// zero-padding when the problem asks for dealiasing.
class NonlinearTerm {
 public:
  explicit NonlinearTerm(const Problem& problem);

  /// `state` holds the normalized half-spectrum coefficients of u (so that an
  /// unscaled inverse transform reproduces u) and `physical` the node values.
  /// Returns false if the pointwise evaluation produced non-finite values.
  bool evaluate(std::span<const Complex> state, std::span<const double> physical,
                std::span<Complex> out);

 private:
  bool evaluate_padded(std::span<const Complex> state, std::span<Complex> out);

  double kappa_;
  Grid grid_;
  FourierTransform fft_;
  std::vector<double> work_;
  // Padded-grid machinery (dealias only).
  std::unique_ptr<FourierTransform> padded_fft_;
  Grid padded_grid_;
  std::vector<Complex> padded_spec_;
  std::vector<double> padded_work_;
  std::vector<std::ptrdiff_t> padded_index_;
};

}  // namespace nch
