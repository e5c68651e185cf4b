#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nch/fft.hpp"
#include "nch/model.hpp"

namespace nch {

enum class Scheme { etd1, etd2 };

std::string_view scheme_name(Scheme s);

/// Per-mode phi-function values at a_k = tau * L_h(k), half-spectrum layout.
struct PhiTable {
  std::vector<double> a;
  std::vector<double> phi_m1;
  std::vector<double> phi_0;
  std::vector<double> phi_1;
};

PhiTable build_phi_table(const Symbol& lh_symbol, double tau);

/// Which nonlinear term the stepper integrates. `none` leaves only the exact
/// linear propagation and exists for verification.
enum class Nonlinearity { stabilized_cubic, none };

/// Precomputed ETD multipliers for one (problem, scheme, tau).
///
/// The plan keeps a reference to `problem`, which must outlive it. ETD2 plans
/// also carry the transformed nonlinear term of the previous level; a plan is
/// therefore bound to one stepping sequence at a time.
class StepperPlan {
 public:
  StepperPlan(const Problem& problem, Scheme scheme, double tau,
              Nonlinearity nonlinearity = Nonlinearity::stabilized_cubic);

  const Problem& problem() const noexcept { return *problem_; }
  Scheme scheme() const noexcept { return scheme_; }
  double tau() const noexcept { return tau_; }
  const PhiTable& phi() const noexcept { return phi_; }
  Nonlinearity nonlinearity() const noexcept { return nonlinearity_; }

  bool has_history() const noexcept { return has_history_; }
  void clear_history() noexcept { has_history_ = false; }
  /// Stores the nonlinear term of the previous level U^{n-1}.
  void set_history(const Field& previous);

  /// Index attached to BlowupError; advanced by every step.
  std::size_t step_index() const noexcept { return step_index_; }
  void set_step_index(std::size_t n) noexcept { step_index_ = n; }

  // Spectral-state primitives. `state` holds normalized half-spectrum
  // coefficients (an unscaled inverse FFT reproduces the field) and
  // `physical` the matching node values.
  void etd1_update(std::span<const Complex> state, std::span<const double> physical,
                   std::span<Complex> out);
  void etd2_update(std::span<const Complex> state, std::span<const double> physical,
                   std::span<Complex> out);
  void etd2_start(std::span<const Complex> state, std::span<const double> physical,
                  std::span<Complex> out);

  /// Normalized half spectrum of u and its inverse.
  void analyze(const Field& u, std::span<Complex> state);
  void synthesize(std::span<const Complex> state, std::span<double> physical);

 private:
  void nonlinear(std::span<const Complex> state, std::span<const double> physical,
                 std::span<Complex> out);

  const Problem* problem_;
  Scheme scheme_;
  double tau_;
  Nonlinearity nonlinearity_;
  PhiTable phi_;

  // Expanded (one entry per real component) multipliers.
  std::vector<double> exp_;        // phi_{-1}
  std::vector<double> etd1_;       // tau phi_0 Delta / N^d
  std::vector<double> current_;    // tau (phi_0 + phi_1) Delta / N^d
  std::vector<double> previous_;   // tau phi_1 Delta / N^d
  std::vector<double> ones_;

  FourierTransform fft_;
  NonlinearTerm term_;
  std::vector<Complex> history_;
  bool has_history_ = false;
  std::size_t step_index_ = 0;

  std::vector<Complex> nl_;
  std::vector<Complex> nl_aux_;
  std::vector<Complex> stage_;
  std::vector<double> stage_physical_;
};

StepperPlan build_plan(const Problem& problem, Scheme scheme, double tau);

/// U+ = phi_{-1}(tau L_h) U + tau phi_0(tau L_h) Delta_N f_kappa(U)
Field etd1_step(StepperPlan& plan, const Field& u);

/// U+ = phi_{-1} U + tau [(phi_0 + phi_1) Delta_N f_kappa(U) - phi_1 Delta_N f_kappa(U_prev)],
/// all phi evaluated at tau L_h. Requires history; replaces it by f_kappa(u).
Field etd2_step(StepperPlan& plan, const Field& u);

/// Exponential second-order Runge-Kutta first step:
///   u* = phi_{-1} u0 + tau phi_0 Delta_N f_kappa(u0)
///   U1 = u* + tau phi_1 Delta_N (f_kappa(u*) - f_kappa(u0))
/// Leaves f_kappa(U1) as history, so the first etd2_step(plan, U1) reduces
/// to an etd1-type update and yields U2.
Field etd2_initialize(StepperPlan& plan, const Field& u0);

/// Advances a state held in spectral form, so the zero mode (mass) is carried
/// exactly from step to step. ETD2 begins with etd2_initialize's update.
class Integrator {
 public:
  Integrator(StepperPlan& plan, const Field& u0);

  void step();
  const Field& field() const noexcept { return physical_; }
  std::size_t steps() const noexcept { return steps_; }
  double time() const noexcept { return static_cast<double>(steps_) * plan_->tau(); }

 private:
  StepperPlan* plan_;
  std::vector<Complex> state_;
  std::vector<Complex> next_;
  Field physical_;
  std::size_t steps_ = 0;
};

}  // namespace nch
