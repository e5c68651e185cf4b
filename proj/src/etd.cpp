#include "nch/etd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nch/error.hpp"
#include "nch/kernels.hpp"
#include "nch/phi.hpp"

namespace nch {

namespace {

// Arguments this far below zero, relative to the largest one, are rounding
// noise of a positive semi-definite symbol.
constexpr double negative_argument_tolerance = 1e-12;

std::span<double> as_reals(std::span<Complex> c) {
  return {reinterpret_cast<double*>(c.data()), 2 * c.size()};
}
std::span<const double> as_reals(std::span<const Complex> c) {
  return {reinterpret_cast<const double*>(c.data()), 2 * c.size()};
}

std::vector<double> expand(const std::vector<double>& per_mode) {
  std::vector<double> out(2 * per_mode.size());
  for (std::size_t i = 0; i < per_mode.size(); ++i) out[2 * i] = out[2 * i + 1] = per_mode[i];
  return out;
}

}  // namespace

std::string_view scheme_name(Scheme s) { return s == Scheme::etd1 ? "etd1" : "etd2"; }

PhiTable build_phi_table(const Symbol& lh_symbol, double tau) {
  if (!(tau > 0.0)) throw ValidationError("tau: must be positive");
  const auto lh = lh_symbol.values();
  const double floor = -negative_argument_tolerance * tau * lh_symbol.max_abs();
  PhiTable t;
  t.a.resize(lh.size());
  t.phi_m1.resize(lh.size());
  t.phi_0.resize(lh.size());
  t.phi_1.resize(lh.size());
  for (std::size_t i = 0; i < lh.size(); ++i) {
    double a = tau * lh[i];
    if (a < 0.0 && a >= floor) a = 0.0;
    t.a[i] = a;
    t.phi_m1[i] = phi_m1(a);
    t.phi_0[i] = phi0(a);
    t.phi_1[i] = phi1(a);
  }
  return t;
}

StepperPlan::StepperPlan(const Problem& problem, Scheme scheme, double tau, Nonlinearity nonlinearity)
    : problem_(&problem),
      scheme_(scheme),
      tau_(tau),
      nonlinearity_(nonlinearity),
      phi_(build_phi_table(problem.lh_symbol, tau)),
      fft_(problem.grid),
      term_(problem),
      history_(problem.grid.half_size()),
      nl_(problem.grid.half_size()),
      nl_aux_(problem.grid.half_size()),
      stage_(problem.grid.half_size()),
      stage_physical_(problem.grid.size()) {
  const std::size_t m = problem.grid.half_size();
  const auto lap = problem.lap_symbol.values();
  const double inv = 1.0 / static_cast<double>(problem.grid.size());
  std::vector<double> etd1(m), current(m), previous(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = tau * lap[i] * inv;
    etd1[i] = d * phi_.phi_0[i];
    current[i] = d * (phi_.phi_0[i] + phi_.phi_1[i]);
    previous[i] = d * phi_.phi_1[i];
  }
  exp_ = expand(phi_.phi_m1);
  etd1_ = expand(etd1);
  current_ = expand(current);
  previous_ = expand(previous);
  ones_.assign(2 * m, 1.0);
}

void StepperPlan::analyze(const Field& u, std::span<Complex> state) {
  require_same_grid(u.grid(), problem_->grid, "StepperPlan");
  if (!u.all_finite()) {
    throw BlowupError(step_index_, "non-finite input state before step " + std::to_string(step_index_ + 1));
  }
  fft_.forward(u.values(), state);
  const double inv = 1.0 / static_cast<double>(problem_->grid.size());
  for (auto& c : state) c *= inv;
}

void StepperPlan::synthesize(std::span<const Complex> state, std::span<double> physical) {
  fft_.backward(state, physical);
}

void StepperPlan::nonlinear(std::span<const Complex> state, std::span<const double> physical,
                            std::span<Complex> out) {
  if (nonlinearity_ == Nonlinearity::none) {
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    return;
  }
  if (!term_.evaluate(state, physical, out)) {
    std::ostringstream os;
    os << "non-finite nonlinear term at step " << step_index_ + 1;
    throw BlowupError(step_index_ + 1, os.str());
  }
}

void StepperPlan::set_history(const Field& previous) {
  require_same_grid(previous.grid(), problem_->grid, "set_history");
  std::vector<Complex> s(problem_->grid.half_size());
  analyze(previous, s);
  nonlinear(s, previous.values(), history_);
  has_history_ = true;
}

void StepperPlan::etd1_update(std::span<const Complex> state, std::span<const double> physical,
                              std::span<Complex> out) {
  nonlinear(state, physical, nl_);
  const auto s = as_reals(state);
  kernels::active().axpby(exp_.data(), s.data(), etd1_.data(), as_reals(std::span<const Complex>(nl_)).data(),
                          as_reals(out).data(), s.size());
  ++step_index_;
}

void StepperPlan::etd2_update(std::span<const Complex> state, std::span<const double> physical,
                              std::span<Complex> out) {
  if (!has_history_) throw MissingHistoryError("etd2 step requires the previous nonlinear term");
  nonlinear(state, physical, nl_);
  const auto s = as_reals(state);
  kernels::active().axpbypcz(exp_.data(), s.data(), current_.data(),
                             as_reals(std::span<const Complex>(nl_)).data(), previous_.data(),
                             as_reals(std::span<const Complex>(history_)).data(), as_reals(out).data(),
                             s.size());
  std::swap(history_, nl_);
  ++step_index_;
}

void StepperPlan::etd2_start(std::span<const Complex> state, std::span<const double> physical,
                             std::span<Complex> out) {
  const auto& k = kernels::active();
  nonlinear(state, physical, nl_);  // f_kappa(u0)
  const auto s = as_reals(state);
  const double* n0 = as_reals(std::span<const Complex>(nl_)).data();
  auto st = as_reals(std::span<Complex>(stage_));
  k.axpby(exp_.data(), s.data(), etd1_.data(), n0, st.data(), s.size());
  fft_.backward(stage_, stage_physical_);
  nonlinear(stage_, stage_physical_, nl_aux_);  // f_kappa(u*)
  k.axpbypcz(ones_.data(), st.data(), previous_.data(), as_reals(std::span<const Complex>(nl_aux_)).data(),
             previous_.data(), n0, as_reals(out).data(), s.size());
  // History is f_kappa(U1), so the first multistep step pairs U1 with itself.
  fft_.backward(out, stage_physical_);
  nonlinear(out, stage_physical_, history_);
  has_history_ = true;
  ++step_index_;
}

StepperPlan build_plan(const Problem& problem, Scheme scheme, double tau) {
  return StepperPlan(problem, scheme, tau);
}

namespace {

template <typename Update>
Field field_step(StepperPlan& plan, const Field& u, Update update) {
  const Grid& grid = plan.problem().grid;
  std::vector<Complex> state(grid.half_size());
  std::vector<Complex> next(grid.half_size());
  plan.analyze(u, state);
  (plan.*update)(state, u.values(), next);
  Field out(grid);
  plan.synthesize(next, out.values());
  return out;
}

}  // namespace

Field etd1_step(StepperPlan& plan, const Field& u) {
  if (plan.scheme() != Scheme::etd1) throw ValidationError("etd1_step called with an etd2 plan");
  return field_step(plan, u, &StepperPlan::etd1_update);
}

Field etd2_step(StepperPlan& plan, const Field& u) {
  if (plan.scheme() != Scheme::etd2) throw ValidationError("etd2_step called with an etd1 plan");
  if (!plan.has_history()) throw MissingHistoryError("etd2 step requires the previous nonlinear term");
  return field_step(plan, u, &StepperPlan::etd2_update);
}

Field etd2_initialize(StepperPlan& plan, const Field& u0) {
  if (plan.scheme() != Scheme::etd2) throw ValidationError("etd2_initialize called with an etd1 plan");
  return field_step(plan, u0, &StepperPlan::etd2_start);
}

Integrator::Integrator(StepperPlan& plan, const Field& u0)
    : plan_(&plan),
      state_(plan.problem().grid.half_size()),
      next_(plan.problem().grid.half_size()),
      physical_(u0) {
  plan.clear_history();
  plan.set_step_index(0);
  plan.analyze(u0, state_);
}

void Integrator::step() {
  if (plan_->scheme() == Scheme::etd1) {
    plan_->etd1_update(state_, physical_.values(), next_);
  } else if (steps_ == 0) {
    plan_->etd2_start(state_, physical_.values(), next_);
  } else {
    plan_->etd2_update(state_, physical_.values(), next_);
  }
  std::swap(state_, next_);
  plan_->synthesize(state_, physical_.values());
  ++steps_;
}

}  // namespace nch
