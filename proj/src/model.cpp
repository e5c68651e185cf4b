#include "nch/model.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "nch/error.hpp"
#include "nch/kernels.hpp"
#include "nch/spectral.hpp"

namespace nch {

Problem build_problem(const Grid& grid, const ModelParams& params) {
  if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(params.kappa >= 0.0)) throw ValidationError("kappa must be non-negative");

  Problem p;
  p.grid = grid;
  p.params = params;
  p.lap_symbol = laplacian_symbol(grid);
  p.nonlocal = build_nonlocal(params.kernel, grid);

  const double eps2 = params.epsilon * params.epsilon;
  p.nonlocal.gamma0 = eps2 * p.nonlocal.j_conv_one - 1.0;
  if (!(p.nonlocal.gamma0 > 0.0)) {
    std::ostringstream os;
    os << "gamma0 = eps^2 (J*1) - 1 = " << p.nonlocal.gamma0 << " is not positive (epsilon="
       << params.epsilon << ", J*1=" << p.nonlocal.j_conv_one << ")";
    if (params.strict_gamma0) throw GammaZeroError(os.str());
    std::clog << "warning: " << os.str() << '\n';
  }

  p.lh_symbol = Symbol(grid);
  const auto lap = p.lap_symbol.values();
  const auto lam = p.nonlocal.lambda.values();
  auto lh = p.lh_symbol.values();
  for (std::size_t i = 0; i < lh.size(); ++i) {
    lh[i] = -lap[i] * (eps2 * lam[i] + params.kappa);
  }
  return p;
}

Field double_well_prime(const Field& u) { return stabilized_nonlinearity(u, 0.0); }

Field stabilized_nonlinearity(const Field& u, double kappa) {
  Field out(u.grid());
  kernels::active().cubic_fkappa(u.values().data(), out.values().data(), u.size(), kappa);
  return out;
}

double energy(const Field& u, const Problem& problem) {
  require_same_grid(u.grid(), problem.grid, "energy");
  std::vector<double> local(u.size());
  for (std::size_t i = 0; i < local.size(); ++i) local[i] = double_well(u[i]);
  const double bulk = u.grid().cell_volume() * pairwise_sum(local);
  const double eps2 = problem.params.epsilon * problem.params.epsilon;
  const double interface = 0.5 * eps2 * inner(apply_symbol(problem.nonlocal.lambda, u), u);
  return bulk + interface;
}

double mass(const Field& u) { return u.grid().cell_volume() * pairwise_sum(u.values()); }

NonlinearTerm::NonlinearTerm(const Problem& problem)
    : kappa_(problem.params.kappa), grid_(problem.grid), fft_(problem.grid), work_(problem.grid.size()) {
  if (!problem.params.dealias) return;

  std::array<std::size_t, 3> m{1, 1, 1};
  std::array<double, 3> x{1.0, 1.0, 1.0};
  for (int a = 0; a < grid_.dim(); ++a) {
    if (grid_.n(a) % 4 != 0) {
      throw ValidationError("dealiasing needs every N divisible by 4");
    }
    m[a] = 3 * grid_.n(a) / 2;
    x[a] = grid_.half_width(a);
  }
  padded_grid_ = Grid(grid_.dim(), m, x);
  padded_fft_ = std::make_unique<FourierTransform>(padded_grid_);
  padded_spec_.resize(padded_grid_.half_size());
  padded_work_.resize(padded_grid_.size());

  const auto ps = padded_grid_.half_shape3();
  const auto pf = padded_grid_.shape3();
  padded_index_.resize(grid_.half_size());
  for (std::size_t i = 0; i < padded_index_.size(); ++i) {
    const ModeIndex k = half_mode(grid_, i);
    bool nyquist = false;
    std::array<std::size_t, 3> p{0, 0, 0};
    for (int a = 0; a < grid_.dim(); ++a) {
      if (std::abs(k[a]) == static_cast<long>(grid_.n(a) / 2)) nyquist = true;
      const int q = grid_.padded_axis(a);
      const long mm = static_cast<long>(pf[q]);
      p[q] = static_cast<std::size_t>(((k[a] % mm) + mm) % mm);
    }
    padded_index_[i] = nyquist ? -1 : static_cast<std::ptrdiff_t>((p[0] * ps[1] + p[1]) * ps[2] + p[2]);
  }
}

bool NonlinearTerm::evaluate(std::span<const Complex> state, std::span<const double> physical,
                             std::span<Complex> out) {
  if (padded_fft_) return evaluate_padded(state, out);
  const bool finite = kernels::active().cubic_fkappa(physical.data(), work_.data(), work_.size(), kappa_);
  fft_.forward(work_, out);
  return finite;
}

bool NonlinearTerm::evaluate_padded(std::span<const Complex> state, std::span<Complex> out) {
  std::fill(padded_spec_.begin(), padded_spec_.end(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < padded_index_.size(); ++i) {
    if (padded_index_[i] >= 0) padded_spec_[static_cast<std::size_t>(padded_index_[i])] = state[i];
  }
  padded_fft_->backward(padded_spec_, padded_work_);
  const bool finite = kernels::active().cubic_fkappa(padded_work_.data(), padded_work_.data(),
                                                     padded_work_.size(), kappa_);
  padded_fft_->forward(padded_work_, padded_spec_);
  const double ratio = static_cast<double>(grid_.size()) / static_cast<double>(padded_grid_.size());
  for (std::size_t i = 0; i < padded_index_.size(); ++i) {
    out[i] = padded_index_[i] >= 0 ? padded_spec_[static_cast<std::size_t>(padded_index_[i])] * ratio
                                   : Complex(0.0, 0.0);
  }
  return finite;
}

}  // namespace nch
