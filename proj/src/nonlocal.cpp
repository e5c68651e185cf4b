#include "nch/nonlocal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "nch/error.hpp"
#include "nch/fft.hpp"
#include "nch/spectral.hpp"

namespace nch {

double gaussian_kernel(double delta, int dim, double r2) {
  const double norm = 4.0 / (std::pow(std::numbers::pi, 0.5 * dim) * std::pow(delta, dim + 2));
  return norm * std::exp(-r2 / (delta * delta));
}

int auto_image_cutoff(double delta, const Grid& grid) {
  // An excluded image m = +-(M+1) lies at least (2M+1) X from any node.
  double x_min = grid.half_width(0);
  for (int a = 1; a < grid.dim(); ++a) x_min = std::min(x_min, grid.half_width(a));
  for (int m = 0; m <= KernelSpec::max_auto_images; ++m) {
    const double d = (2.0 * m + 1.0) * x_min;
    if (std::exp(-d * d / (delta * delta)) < KernelSpec::tail_tolerance) return m;
  }
  std::ostringstream os;
  os << "kernel width delta=" << delta << " needs more than " << KernelSpec::max_auto_images
     << " periodic images per axis";
  throw KernelCutoffError(os.str());
}

Field periodize_kernel(const KernelSpec& spec, const Grid& grid) {
  if (spec.kind == KernelKind::tabulated) {
    if (!spec.table) throw ValidationError("tabulated kernel without a table");
    require_same_grid(spec.table->grid(), grid, "periodize_kernel");
    return *spec.table;
  }
  if (!(spec.delta > 0.0)) throw ValidationError("kernel delta must be positive");
  const int images = spec.image_cutoff < 0 ? auto_image_cutoff(spec.delta, grid) : spec.image_cutoff;

  // The Gaussian factorizes over axes, so the image lattice sum does too.
  const double inv_d2 = 1.0 / (spec.delta * spec.delta);
  std::vector<std::vector<double>> axis_sum(static_cast<std::size_t>(grid.dim()));
  for (int a = 0; a < grid.dim(); ++a) {
    auto& g = axis_sum[static_cast<std::size_t>(a)];
    g.resize(grid.n(a));
    const double period = 2.0 * grid.half_width(a);
    for (std::size_t j = 0; j < grid.n(a); ++j) {
      const double x = grid.coordinate(a, j);
      double s = 0.0;
      for (int m = -images; m <= images; ++m) {
        const double y = x + period * m;
        s += std::exp(-y * y * inv_d2);
      }
      g[j] = s;
    }
  }
  const double norm = gaussian_kernel(spec.delta, grid.dim(), 0.0);
  Field kernel(grid);
  const auto s = grid.shape3();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < s[0]; ++i) {
    for (std::size_t j = 0; j < s[1]; ++j) {
      for (std::size_t k = 0; k < s[2]; ++k, ++idx) {
        const std::array<std::size_t, 3> p{i, j, k};
        double v = norm;
        for (int a = 0; a < grid.dim(); ++a) v *= axis_sum[static_cast<std::size_t>(a)][p[grid.padded_axis(a)]];
        kernel[idx] = v;
      }
    }
  }
  return kernel;
}

double conv_one(const Field& kernel) {
  return kernel.grid().cell_volume() * pairwise_sum(kernel.values());
}

Symbol nonlocal_symbol(const Field& kernel) {
  const Grid& grid = kernel.grid();
  const SpectralField jhat = to_spectral(kernel);
  const double scale = grid.cell_volume() * static_cast<double>(grid.size());
  const Complex j0 = jhat.coeffs()[0];

  Symbol lambda(grid);
  auto out = lambda.values();
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Complex l = scale * (j0 - jhat.at(half_mode(grid, i)));
    out[i] = l.real();
    max_re = std::max(max_re, std::abs(l.real()));
    max_im = std::max(max_im, std::abs(l.imag()));
  }
  out[0] = 0.0;
  if (max_im > kernel_symmetry_tolerance * max_re) {
    std::ostringstream os;
    os << "nonlocal_symbol: eigenvalue imaginary residue " << max_im << " vs " << max_re
       << " (kernel is not even)";
    throw SymmetryError(os.str());
  }
  return lambda;
}

Field discrete_convolution(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "discrete_convolution");
  const Grid& grid = f.grid();
  FourierTransform fft(grid);
  std::vector<Complex> fs(grid.half_size());
  std::vector<Complex> gs(grid.half_size());
  fft.forward(f.values(), fs);
  fft.forward(g.values(), gs);
  // A displacement of (i - m) h sits at storage index i - m + N/2, hence the
  // (-1)^k shift phase.
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const ModeIndex k = half_mode(grid, i);
    long total = 0;
    for (int a = 0; a < grid.dim(); ++a) total += k[a];
    const double sign = total % 2 == 0 ? 1.0 : -1.0;
    fs[i] = fs[i] * gs[i] * (sign * scale);
  }
  Field out(grid);
  fft.backward(fs, out.values());
  return out;
}

NonlocalOperator build_nonlocal(const KernelSpec& spec, const Grid& grid) {
  const Field kernel = periodize_kernel(spec, grid);
  NonlocalOperator op;
  op.lambda = nonlocal_symbol(kernel);
  op.j_conv_one = conv_one(kernel);
  op.gamma0 = std::numeric_limits<double>::quiet_NaN();
  return op;
}

}  // namespace nch
