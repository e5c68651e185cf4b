#include "nch/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "nch/error.hpp"
#include "nch/spectral.hpp"

namespace nch {

Field random_uniform_field(const Grid& grid, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Field f(grid);
  constexpr double unit = 0x1.0p-53;
  for (auto& v : f.values()) {
    const double u01 = static_cast<double>(rng() >> 11) * unit;
    v = amplitude * (2.0 * u01 - 1.0);
  }
  return f;
}

Field initial_condition(const InitSpec& spec, const Grid& grid) {
  using std::numbers::pi;
  auto need_dim = [&](int d) {
    if (grid.dim() != d) throw ValidationError("init.kind: initial data needs a " + std::to_string(d) + "D grid");
  };
  switch (spec.kind) {
    case InitKind::sine1d:
      need_dim(1);
      return Field::from_function(grid, [](const auto& x) {
        return 0.1 * (std::sin(2.0 * pi * x[0]) + std::sin(3.0 * pi * x[0]));
      });
    case InitKind::sine2d:
      need_dim(2);
      return Field::from_function(grid, [](const auto& x) {
        return 0.05 * std::sin(pi * x[0]) * std::sin(pi * x[1]);
      });
    case InitKind::sine3d:
      need_dim(3);
      return Field::from_function(grid, [](const auto& x) {
        return 0.05 * std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
      });
    case InitKind::random_uniform:
      return random_uniform_field(grid, spec.amplitude, spec.seed);
    case InitKind::constant:
      return Field(grid, spec.value);
    case InitKind::file: {
      Snapshot s = read_snapshot(spec.path);
      if (!(s.field.grid() == grid)) throw ValidationError("init.path: snapshot grid does not match the run grid");
      return std::move(s.field);
    }
  }
  throw ValidationError("init.kind: unknown initial condition");
}

Problem make_problem(const RunConfig& config) {
  const Grid grid = config.grid();
  ModelParams params = config.model_params();
  if (params.kernel.kind == KernelKind::tabulated) {
    Snapshot s = read_snapshot(config.kernel_file);
    if (!(s.field.grid() == grid)) throw ValidationError("kernel_file: kernel grid does not match the run grid");
    params.kernel.table = std::move(s.field);
  }
  return build_problem(grid, params);
}

double richardson_error(const Field& coarse, const Field& fine) {
  require_same_grid(coarse.grid(), fine.grid(), "richardson_error");
  return norm_hm1(coarse - fine);
}

std::vector<ConvergenceRow> rate_table(const std::vector<double>& taus, const std::vector<double>& errors) {
  if (taus.size() != errors.size()) throw ShapeError("rate_table: tau and error counts differ");
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    ConvergenceRow r{taus[k], errors[k], std::nullopt};
    if (k > 0) r.rate = std::log(errors[k - 1] / errors[k]) / std::numbers::ln2;
    rows.push_back(r);
  }
  return rows;
}

Field solve_to_end(const Problem& problem, const RunConfig& config, double tau) {
  const std::size_t steps = config.step_count(tau);
  StepperPlan plan(problem, config.scheme, tau);
  Integrator integrator(plan, initial_condition(config.init, problem.grid));
  for (std::size_t n = 0; n < steps; ++n) integrator.step();
  return integrator.field();
}

ConvergenceStudy convergence_study(const RunConfig& config) {
  const Problem problem = make_problem(config);
  const bool pairs = config.reference_tau == 0.0;
  const auto levels = static_cast<std::size_t>(config.ladder_levels);

  // Solves 0..levels are the ladder tau 2^-k; the last solve is the
  // half-step run (pairs) or the fixed reference. All are independent.
  std::vector<double> steps;
  for (std::size_t k = 0; k <= levels; ++k) steps.push_back(std::ldexp(config.tau, -static_cast<int>(k)));
  steps.push_back(pairs ? steps.back() / 2.0 : config.reference_tau);
  for (double s : steps) config.step_count(s);

  std::vector<std::optional<Field>> solutions(steps.size());
  std::vector<std::string> failures(steps.size());
  std::vector<std::exception_ptr> errors_seen(steps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < steps.size(); i = next++) {
      try {
        solutions[i] = solve_to_end(problem, config, steps[i]);
      } catch (const BlowupError& e) {
        failures[i] = e.what();
      } catch (...) {
        errors_seen[i] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::min<std::size_t>(steps.size(), std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors_seen) {
    if (e) std::rethrow_exception(e);
  }

  ConvergenceStudy study;
  std::vector<double> taus;
  std::vector<double> errors;
  const std::size_t ref = steps.size() - 1;
  for (std::size_t k = 0; k <= levels; ++k) {
    const std::size_t other = pairs ? k + 1 : ref;
    const std::size_t bad = !solutions[k] ? k : other;
    if (!solutions[k] || !solutions[other]) {
      study.aborted = failures[bad];
      break;
    }
    taus.push_back(steps[k]);
    errors.push_back(richardson_error(*solutions[k], *solutions[other]));
  }
  study.rows = rate_table(taus, errors);
  return study;
}

DiagnosticsRecord diagnose(const Field& u, const Problem& problem, std::size_t step, double time) {
  DiagnosticsRecord r;
  r.step = step;
  r.time = time;
  r.energy = energy(u, problem);
  r.mass = mass(u);
  r.l2 = norm_l2(u);
  r.linf = norm_linf(u);
  r.hm1 = std::abs(mean(u)) <= zero_mean_tolerance * r.linf ? norm_hm1(u)
                                                             : std::numeric_limits<double>::quiet_NaN();
  return r;
}

namespace {

std::filesystem::path snapshot_path(const RunConfig& config, std::size_t step) {
  char name[64];
  std::snprintf(name, sizeof name, "snapshot_%08zu.nchs", step);
  return std::filesystem::path(config.out_dir) / name;
}

}  // namespace

RunLog run_simulation(const RunConfig& config, const RunOptions& options) {
  const Problem problem = make_problem(config);
  const std::size_t steps = config.step_count(config.tau);
  const Field u0 = initial_condition(config.init, problem.grid);

  RunLog log;
  log.config_echo = serialize_config(config);
  if (config.init.kind == InitKind::random_uniform) log.seed = config.init.seed;

  const bool snapshots = options.write_snapshots && config.snapshot_every > 0;
  if (snapshots) std::filesystem::create_directories(config.out_dir);

  auto record = [&](const Field& u, std::size_t step) {
    log.records.push_back(diagnose(u, problem, step, static_cast<double>(step) * config.tau));
    if (options.on_record) options.on_record(log.records.back());
  };

  StepperPlan plan(problem, config.scheme, config.tau);
  Integrator integrator(plan, u0);
  record(u0, 0);
  if (snapshots) write_snapshot(u0, 0.0, snapshot_path(config, 0));

  Field previous;
  for (std::size_t n = 1; n <= steps; ++n) {
    if (config.steady_stop) previous = integrator.field();
    try {
      integrator.step();
    } catch (const BlowupError&) {
      if (options.write_snapshots) {
        std::filesystem::create_directories(config.out_dir);
        write_snapshot(integrator.field(), integrator.time(),
                       std::filesystem::path(config.out_dir) / "snapshot_last_good.nchs");
      }
      throw;
    }
    const Field& u = integrator.field();
    bool steady = false;
    if (config.steady_stop) {
      double change = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) change = std::max(change, std::abs(u[i] - previous[i]));
      steady = change / config.tau < config.steady_tol;
    }
    const bool last = n == steps || steady;
    if (n % config.log_every == 0 || last) record(u, n);
    if (snapshots && (n % config.snapshot_every == 0 || last)) {
      write_snapshot(u, integrator.time(), snapshot_path(config, n));
    }
    if (steady) break;
  }
  return log;
}

PowerLawFit fit_power_law(const RunLog& log, double t_min, double t_max) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : log.records) {
    if (r.time < t_min || r.time > t_max || !(r.time > 0.0)) continue;
    if (!(r.energy > 0.0)) {
      std::ostringstream os;
      os << "energy " << r.energy << " at t = " << r.time << " is not positive";
      throw NonpositiveEnergyError(os.str());
    }
    x.push_back(std::log(r.time));
    y.push_back(std::log(r.energy));
  }
  if (x.size() < 10) {
    throw InsufficientDataError("power-law fit needs at least 10 records in the window, got " +
                                std::to_string(x.size()));
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("power-law fit needs at least two distinct times");
  PowerLawFit fit;
  fit.m_e = sxy / sxx;
  const double intercept = my - fit.m_e * mx;
  fit.b_e = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + fit.m_e * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / count);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.points = x.size();
  return fit;
}

PowerLawFit fit_power_law(const RunLog& log) {
  if (log.records.empty()) throw InsufficientDataError("power-law fit on an empty log");
  const double t_end = log.records.back().time;
  return fit_power_law(log, 0.1 * t_end, t_end);
}

}  // namespace nch
