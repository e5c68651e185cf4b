#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nch/error.hpp"
#include "nch/experiments.hpp"
#include "nch/fft.hpp"
#include "nch/model.hpp"
#include "nch/spectral.hpp"
#include "support/oracles.hpp"

using namespace nch;
using std::numbers::pi;

namespace {

ModelParams params(double epsilon, double delta, double kappa) {
  ModelParams p;
  p.epsilon = epsilon;
  p.kappa = kappa;
  p.kernel.delta = delta;
  return p;
}

Field zero_mean_random(const Grid& g, std::uint64_t seed) {
  Field f = random_uniform_field(g, 1.0, seed);
  const double m = mean(f);
  for (auto& v : f.values()) v -= m;
  return f;
}

// Physical values of the cubic term returned by NonlinearTerm.
Field evaluate_term(const Problem& problem, const Field& u) {
  const Grid& g = problem.grid;
  FourierTransform fft(g);
  std::vector<Complex> state(g.half_size());
  fft.forward(u.values(), state);
  for (auto& c : state) c /= static_cast<double>(g.size());
  NonlinearTerm term(problem);
  std::vector<Complex> out(g.half_size());
  REQUIRE(term.evaluate(state, u.values(), out));
  Field f(g);
  fft.backward(out, f.values());
  f *= 1.0 / static_cast<double>(g.size());
  return f;
}

}  // namespace

TEST_CASE("double-well derivative") {
  const Grid g = Grid::uniform(1, 8, 1.0);
  CHECK(norm_linf(double_well_prime(Field(g, 0.0))) == 0.0);
  CHECK(norm_linf(double_well_prime(Field(g, 1.0))) == 0.0);
  const Field two = double_well_prime(Field(g, 2.0));
  for (double v : two.values()) CHECK(v == 6.0);
  CHECK(double_well(0.0) == 0.25);
  CHECK(double_well(-1.0) == 0.0);
}

TEST_CASE("stabilized nonlinearity") {
  const Grid g = Grid::uniform(1, 16, 1.0);
  CHECK(norm_linf(stabilized_nonlinearity(Field(g, 0.0), 2.0)) == 0.0);
  const Field one = stabilized_nonlinearity(Field(g, 1.0), 2.0);
  for (double v : one.values()) CHECK(v == -2.0);
  const Field u = random_uniform_field(g, 1.5, 8);
  const Field f = double_well_prime(u);
  CHECK(oracle::max_abs_diff(stabilized_nonlinearity(u, 0.0), f) == 0.0);
  const Field fk = stabilized_nonlinearity(u, 3.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double back = fk[i] + 3.0 * u[i];
    CHECK(std::abs(back - f[i]) <= 2.0 * std::numeric_limits<double>::epsilon() * (std::abs(f[i]) + 3.0 * std::abs(u[i])));
  }
}

TEST_CASE("energy of constants and of a local-only state") {
  const Problem p = build_problem(Grid::uniform(2, 16, 1.0), params(0.1, 0.1, 2.0));
  CHECK(energy(Field(p.grid, 0.0), p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(energy(Field(p.grid, 1.0), p)) < 1e-14);
  for (double c : {-0.7, 0.3, 2.0}) {
    CHECK(energy(Field(p.grid, c), p) == doctest::Approx(4.0 * double_well(c)).epsilon(1e-13));
  }

  const Grid g = Grid::uniform(1, 32, 1.0);
  ModelParams zero = params(0.1, 0.1, 2.0);
  zero.kernel.kind = KernelKind::tabulated;
  zero.kernel.table = Field(g, 0.0);
  zero.strict_gamma0 = false;
  const Problem pz = build_problem(g, zero);
  const Field s = Field::from_function(g, [](const auto& x) { return std::sin(pi * x[0]); });
  double direct = 0.0;
  for (double v : s.values()) direct += double_well(v);
  direct *= g.spacing(0);
  CHECK(std::abs(energy(s, pz) - direct) < 1e-12);
}

TEST_CASE("mass") {
  const Grid g = Grid::uniform(2, 16, 1.0);
  CHECK(mass(Field(g, 0.25)) == doctest::Approx(1.0));
  CHECK(std::abs(mass(Field::from_function(g, [](const auto& x) { return std::sin(pi * x[0]); }))) < 1e-14);
  const Field u = random_uniform_field(g, 1.0, 12);
  CHECK(std::abs(mass(u) - g.volume() * mean(u)) <= 1e-13 * std::abs(mass(u)));
}

TEST_CASE("build_problem checks positivity") {
  const Grid g = Grid::uniform(2, 64, 1.0);
  const Problem ok = build_problem(g, params(0.1, 0.1, 2.0));
  CHECK(ok.nonlocal.gamma0 == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(build_problem(g, params(0.1, 0.3, 2.0)), GammaZeroError);
  ModelParams lax = params(0.1, 0.3, 2.0);
  lax.strict_gamma0 = false;
  CHECK(build_problem(g, lax).nonlocal.gamma0 < 0.0);
  CHECK_THROWS_AS(build_problem(g, params(0.0, 0.1, 2.0)), ValidationError);
  CHECK_THROWS_AS(build_problem(g, params(0.1, 0.1, -1.0)), ValidationError);
}

TEST_CASE("stabilized symbol") {
  const Grid g = Grid::uniform(2, 16, 1.0);
  const Problem p = build_problem(g, params(0.3, 0.3, 2.5));
  const Problem p0 = build_problem(g, params(0.3, 0.3, 0.0));
  for (std::size_t i = 0; i < p.lh_symbol.size(); ++i) {
    const double mu = -p.lap_symbol.values()[i];
    const double lambda = p.nonlocal.lambda.values()[i];
    CHECK(p.lh_symbol.values()[i] == doctest::Approx(mu * (0.09 * lambda + 2.5)).epsilon(1e-14));
    CHECK(p0.lh_symbol.values()[i] == mu * (0.09 * lambda));
    if (i == 0) {
      CHECK(p.lh_symbol.values()[i] == 0.0);
    } else {
      CHECK(p.lh_symbol.values()[i] > 0.0);
    }
  }
}

TEST_CASE("stabilized operator is self-adjoint and positive on zero-mean fields") {
  const Grid g(2, {16, 8, 1}, {1.0, 0.5, 1.0});
  const Problem p = build_problem(g, params(0.2, 0.15, 2.0));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field f = random_uniform_field(g, 1.0, seed);
    const Field h = random_uniform_field(g, 1.0, seed + 50);
    const double a = inner(apply_symbol(p.lh_symbol, f), h);
    const double b = inner(f, apply_symbol(p.lh_symbol, h));
    CHECK(std::abs(a - b) <= 1e-10 * norm_l2(f) * norm_l2(h) * p.lh_symbol.max_abs());
    const Field z = zero_mean_random(g, seed);
    CHECK(inner(apply_symbol(p.lh_symbol, z), z) > 0.0);
  }
}

TEST_CASE("nonlinear term on the collocation grid and with padding") {
  const Grid g = Grid::uniform(1, 16, 1.0);
  const Field u = Field::from_function(g, [](const auto& x) { return std::cos(5 * pi * x[0]); });
  const Field c1 = Field::from_function(g, [](const auto& x) { return std::cos(pi * x[0]); });
  const Field& c5 = u;

  ModelParams plain = params(0.3, 0.3, 2.0);
  const Problem pp = build_problem(g, plain);
  // f_kappa = u^3 - 3u, cos^3 = (3 cos(5 pi x) + cos(15 pi x)) / 4, and mode 15
  // aliases onto mode -1.
  Field aliased = (0.75 - 3.0) * c5;
  aliased += 0.25 * c1;
  CHECK(oracle::max_abs_diff(evaluate_term(pp, u), aliased) < 1e-14);

  ModelParams dealias = plain;
  dealias.dealias = true;
  const Problem pd = build_problem(g, dealias);
  const Field truncated = (0.75 - 3.0) * c5;
  CHECK(oracle::max_abs_diff(evaluate_term(pd, u), truncated) < 1e-14);

  const Problem odd_quarter = build_problem(Grid::uniform(1, 14, 1.0), dealias);
  CHECK_THROWS_AS(NonlinearTerm{odd_quarter}, ValidationError);
}
