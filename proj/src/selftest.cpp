#include "nch/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "nch/config.hpp"
#include "nch/error.hpp"
#include "nch/etd.hpp"
#include "nch/experiments.hpp"
#include "nch/io.hpp"
#include "nch/kernels.hpp"
#include "nch/phi.hpp"
#include "nch/spectral.hpp"

namespace nch {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

CheckResult bounded(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, "max deviation " + sci(value) + " (limit " + sci(limit) + ")"};
}

CheckResult check_round_trip() {
  const Grid g(2, {8, 6, 1}, {1.0, 1.5, 1.0});
  const Field f = random_uniform_field(g, 1.0, 7);
  return bounded("transform_round_trip", max_abs_diff(to_physical(to_spectral(f)), f), 1e-14);
}

CheckResult check_direct_dft() {
  const Grid g = Grid::uniform(1, 12, 1.5);
  const Field f = random_uniform_field(g, 1.0, 11);
  const SpectralField s = to_spectral(f);
  double err = 0.0;
  const auto n = static_cast<long>(g.n(0));
  for (long k = -n / 2 + 1; k <= n / 2; ++k) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < g.n(0); ++j) {
      const double theta = -g.angular(0, k) * g.coordinate(0, j);
      sum += f[j] * Complex(std::cos(theta), std::sin(theta));
    }
    sum /= static_cast<double>(n);
    err = std::max(err, std::abs(sum - s.at({k, 0, 0})));
  }
  return bounded("direct_dft", err, 1e-14);
}

CheckResult check_laplacian() {
  using std::numbers::pi;
  const Grid g(2, {16, 8, 1}, {1.0, 2.0, 1.0});
  const Field f = Field::from_function(g, [](const auto& x) { return std::sin(3 * pi * x[0]) * std::cos(pi * x[1] / 2); });
  Field expected = f;
  expected *= -(9 * pi * pi + pi * pi / 4);
  const double scale = norm_linf(expected);
  return bounded("laplacian_eigenfunction", max_abs_diff(apply_symbol(laplacian_symbol(g), f), expected) / scale,
                 1e-13);
}

CheckResult check_nonlocal_sum() {
  const Grid g = Grid::uniform(1, 32, 1.0);
  KernelSpec spec;
  spec.delta = 0.3;
  const Field kernel = periodize_kernel(spec, g);
  const Symbol lambda = nonlocal_symbol(kernel);
  const auto n = static_cast<long>(g.n(0));
  double err = 0.0;
  double scale = 0.0;
  for (long k = 0; k <= n / 2; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < g.n(0); ++j) {
      sum += kernel[j] * (1.0 - std::cos(g.angular(0, k) * g.coordinate(0, j)));
    }
    sum *= g.cell_volume();
    err = std::max(err, std::abs(sum - lambda.at({k, 0, 0})));
    scale = std::max(scale, std::abs(sum));
  }
  return bounded("nonlocal_literal_sum", err / scale, 1e-11);
}

CheckResult check_phi_bounds() {
  std::string detail;
  const std::size_t bad = count_phi_bound_violations(1e-12, 1e6, 10000, &detail);
  return {"phi_bounds", bad == 0, bad == 0 ? "10000 points in [1e-12, 1e6]" : detail};
}

CheckResult check_phi_switch() { return bounded("phi_branch_agreement", phi_switch_gap(1000), 1e-15); }

Problem small_problem(int dim, std::size_t n, double kappa) {
  ModelParams p;
  p.epsilon = 0.3;
  p.kappa = kappa;
  p.kernel.delta = 0.3;
  return build_problem(Grid::uniform(dim, n, 1.0), p);
}

CheckResult check_mass() {
  const Problem problem = small_problem(2, 16, 3.0);
  Field u0 = random_uniform_field(problem.grid, 0.5, 3);
  for (auto& v : u0.values()) v += 0.2;
  StepperPlan plan(problem, Scheme::etd2, 0.01);
  Integrator integ(plan, u0);
  const double m0 = mass(u0);
  double drift = 0.0;
  for (int n = 0; n < 200; ++n) {
    integ.step();
    drift = std::max(drift, std::abs(mass(integ.field()) - m0));
  }
  return bounded("mass_conservation", drift / (1.0 + std::abs(m0)), 1e-12);
}

CheckResult check_linear_exactness() {
  using std::numbers::pi;
  const Problem problem = small_problem(2, 16, 2.0);
  const Field u0 = Field::from_function(problem.grid, [](const auto& x) { return std::cos(2 * pi * x[0]) * std::sin(pi * x[1]); });
  const double tau = 0.003;
  const int steps = 50;
  double err = 0.0;
  for (Scheme s : {Scheme::etd1, Scheme::etd2}) {
    StepperPlan plan(problem, s, tau, Nonlinearity::none);
    Integrator integ(plan, u0);
    for (int n = 0; n < steps; ++n) integ.step();
    Field expected = u0;
    expected *= std::exp(-steps * tau * problem.lh_symbol.at({2, 1, 0}));
    err = std::max(err, max_abs_diff(integ.field(), expected));
  }
  return bounded("linear_exactness", err, 1e-11);
}

CheckResult check_energy() {
  const Problem problem = small_problem(2, 16, 2.0);
  const Field u0 = random_uniform_field(problem.grid, 0.3, 5);
  StepperPlan plan(problem, Scheme::etd1, 0.01);
  Integrator integ(plan, u0);
  double previous = energy(u0, problem);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    integ.step();
    const double e = energy(integ.field(), problem);
    worst = std::max(worst, (e - previous) / std::abs(previous));
    previous = e;
  }
  return bounded("energy_decay", worst, 1e-9);
}

CheckResult check_power_law() {
  RunLog log;
  for (int i = 1; i <= 200; ++i) {
    const double t = i * 0.5;
    log.records.push_back({static_cast<std::size_t>(i), t, 21.08 * std::pow(t, -0.314), 0, 0, 0, 0});
  }
  const PowerLawFit fit = fit_power_law(log, 1.0, 100.0);
  const double err = std::max(std::abs(fit.m_e + 0.314), std::abs(fit.b_e - 21.08) / 21.08);
  return bounded("power_law_recovery", err, 1e-10);
}

CheckResult check_snapshot() {
  const Grid g(3, {4, 6, 8}, {1.0, 2.0, 0.5});
  const Field f = random_uniform_field(g, 2.0, 9);
  const auto bytes = encode_snapshot(f, 1.25);
  const Snapshot s = decode_snapshot(bytes);
  const bool ok = bytes.size() == snapshot_header_bytes(3) + 8 * g.size() && s.field.grid() == g &&
                  s.time == 1.25 && max_abs_diff(s.field, f) == 0.0;
  return {"snapshot_round_trip", ok, std::to_string(bytes.size()) + " bytes"};
}

CheckResult check_config() {
  RunConfig c = parse_config("scheme = \"etd1\"\ndim = 1\nn = [32]\ntau = 0.01\nt_end = 0.1\n");
  const RunConfig back = parse_config(serialize_config(c));
  return {"config_round_trip", back == c, "serialized text parses to the same configuration"};
}

CheckResult check_kernel_variants() {
  using kernels::Isa;
  const kernels::KernelTable* fast = kernels::avx2_table();
  if (fast == nullptr || !kernels::isa_available(Isa::avx2)) {
    return {"kernel_variants", true, "avx2 unavailable, scalar only"};
  }
  const kernels::KernelTable& ref = kernels::scalar_table();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const std::size_t n = 1037;
  std::vector<double> a(n), x(n), b(n), y(n), c(n), z(n), r1(n), r2(n);
  for (auto* v : {&a, &x, &b, &y, &c, &z}) {
    for (auto& e : *v) e = dist(rng);
  }
  bool same = true;
  auto compare = [&] {
    for (std::size_t i = 0; i < n; ++i) same = same && std::memcmp(&r1[i], &r2[i], sizeof(double)) == 0;
  };
  same = same && ref.cubic_fkappa(x.data(), r1.data(), n, 3.0) == fast->cubic_fkappa(x.data(), r2.data(), n, 3.0);
  compare();
  ref.axpby(a.data(), x.data(), b.data(), y.data(), r1.data(), n);
  fast->axpby(a.data(), x.data(), b.data(), y.data(), r2.data(), n);
  compare();
  ref.axpbypcz(a.data(), x.data(), b.data(), y.data(), c.data(), z.data(), r1.data(), n);
  fast->axpbypcz(a.data(), x.data(), b.data(), y.data(), c.data(), z.data(), r2.data(), n);
  compare();
  ref.scale(a.data(), x.data(), r1.data(), n);
  fast->scale(a.data(), x.data(), r2.data(), n);
  compare();
  return {"kernel_variants", same, same ? "scalar and avx2 bit-identical" : "scalar and avx2 differ"};
}

}  // namespace

std::size_t count_phi_bound_violations(double a_min, double a_max, std::size_t n, std::string* detail) {
  std::size_t bad = 0;
  const double step = (std::log(a_max) - std::log(a_min)) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i + 1 == n ? a_max : std::exp(std::log(a_min) + step * static_cast<double>(i));
    const double p0 = phi0(a);
    const double p1 = phi1(a);
    // (1+a) e^-a in (0, 1) is checked as log1p(a) - a in (-inf, 0): the
    // product itself underflows for large a and rounds to 1 for tiny a.
    const double log_m1 = std::log1p(a) - a;
    const double b0 = (1.0 + a) * p0;
    const double b1 = (1.0 + a) * p1;
    const double b01 = (1.0 + a) * (p0 - p1);
    const bool ok = std::isfinite(log_m1) && log_m1 < 0.0 && b0 > 1.0 && b0 < 1.5 && b1 > 0.5 && b1 < 1.0 &&
                    b01 > 0.0 && b01 < 1.0;
    if (!ok) {
      if (bad == 0 && detail != nullptr) {
        std::ostringstream os;
        os.precision(17);
        os << "a = " << a << ": log((1+a)phi_-1) = " << log_m1 << ", (1+a)phi_0 = " << b0
           << ", (1+a)phi_1 = " << b1 << ", (1+a)(phi_0-phi_1) = " << b01;
        *detail = os.str();
      }
      ++bad;
    }
  }
  return bad;
}

double phi_switch_gap(std::size_t n) {
  double gap = 0.0;
  const double lo = 0.5 * phi_series_threshold;
  const double hi = 2.0 * phi_series_threshold;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    gap = std::max(gap, std::abs(phi0_series(a) - phi0_closed(a)) / phi0_closed(a));
    gap = std::max(gap, std::abs(phi1_series(a) - phi1_closed(a)) / phi1_closed(a));
  }
  return gap;
}

std::vector<CheckResult> run_selftest() {
  using Check = CheckResult (*)();
  const Check checks[] = {check_round_trip, check_direct_dft,  check_laplacian,       check_nonlocal_sum,
                          check_phi_bounds, check_phi_switch,  check_mass,            check_linear_exactness,
                          check_energy,     check_power_law,   check_snapshot,        check_config,
                          check_kernel_variants};
  std::vector<CheckResult> results;
  for (Check c : checks) {
    try {
      results.push_back(c());
    } catch (const std::exception& e) {
      results.push_back({"check", false, std::string("threw: ") + e.what()});
    }
  }
  return results;
}

}  // namespace nch
