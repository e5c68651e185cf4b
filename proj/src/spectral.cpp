#include "nch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "nch/error.hpp"
#include "nch/fft.hpp"

namespace nch {

namespace {

double phase_sign(const ModeIndex& k, int dim) {
  long total = 0;
  for (int a = 0; a < dim; ++a) total += k[a];
  return (total % 2 == 0) ? 1.0 : -1.0;
}

// Transforms f, multiplies the half spectrum in place by `op(offset, c)`,
// and transforms back with the 1/N^d factor applied.
template <typename Op>
Field spectral_map(const Field& f, Op&& op) {
  const Grid& grid = f.grid();
  FourierTransform fft(grid);
  std::vector<Complex> spec(grid.half_size());
  fft.forward(f.values(), spec);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = op(i, spec[i]) * inv;
  Field out(grid);
  fft.backward(spec, out.values());
  return out;
}

void require_zero_mean(const Field& f, const char* what) {
  const double m = mean(f);
  const double scale = norm_linf(f);
  if (std::abs(m) > zero_mean_tolerance * scale) {
    std::ostringstream os;
    os << what << ": field mean " << m << " exceeds zero-mean tolerance";
    throw MeanError(os.str());
  }
}

}  // namespace

SpectralField to_spectral(const Field& f) {
  if (!f.all_finite()) throw DomainError("to_spectral: non-finite input");
  const Grid& grid = f.grid();
  std::vector<Complex> in(f.values().begin(), f.values().end());
  SpectralField out(grid);
  full_dft(grid, in, out.coeffs(), false);
  const double inv = 1.0 / static_cast<double>(grid.size());
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] *= phase_sign(out.mode(i), grid.dim()) * inv;
  }
  return out;
}

Field to_physical(const SpectralField& coeffs) {
  const Grid& grid = coeffs.grid();
  std::vector<Complex> in(coeffs.coeffs().begin(), coeffs.coeffs().end());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] *= phase_sign(coeffs.mode(i), grid.dim());
  std::vector<Complex> out(grid.size());
  full_dft(grid, in, out, true);
  Field f(grid);
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    f[i] = out[i].real();
    max_re = std::max(max_re, std::abs(out[i].real()));
    max_im = std::max(max_im, std::abs(out[i].imag()));
  }
  if (max_im > imaginary_residue_tolerance * max_re) {
    std::ostringstream os;
    os << "to_physical: imaginary residue " << max_im << " vs real magnitude " << max_re;
    throw SymmetryError(os.str());
  }
  return f;
}

Symbol laplacian_symbol(const Grid& grid) {
  return Symbol::from_modes(grid, [&grid](const ModeIndex& k) {
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double w = grid.angular(a, k[a]);
      s -= w * w;
    }
    return s;
  });
}

Field derivative(const Field& f, int axis) {
  const Grid& grid = f.grid();
  if (axis < 0 || axis >= grid.dim()) throw ValidationError("derivative: axis out of range");
  const long nyquist = static_cast<long>(grid.n(axis) / 2);
  return spectral_map(f, [&](std::size_t i, Complex c) {
    const long k = half_mode(grid, i)[axis];
    if (k == nyquist) return Complex(0.0, 0.0);
    return Complex(0.0, grid.angular(axis, k)) * c;
  });
}

Field apply_symbol(const Symbol& symbol, const Field& f) {
  require_same_grid(symbol.grid(), f.grid(), "apply_symbol");
  const auto s = symbol.values();
  return spectral_map(f, [&](std::size_t i, Complex c) { return s[i] * c; });
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i];
  return f.grid().cell_volume() * pairwise_sum(prod);
}

double norm_l2(const Field& f) { return std::sqrt(inner(f, f)); }

double norm_linf(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double mean(const Field& f) { return pairwise_sum(f.values()) / static_cast<double>(f.size()); }

Field inverse_neg_laplacian(const Field& f) {
  require_zero_mean(f, "inverse_neg_laplacian");
  const Symbol lap = laplacian_symbol(f.grid());
  const auto s = lap.values();
  return spectral_map(f, [&](std::size_t i, Complex c) {
    return i == 0 ? Complex(0.0, 0.0) : c / (-s[i]);
  });
}

double norm_hm1(const Field& f) {
  require_zero_mean(f, "norm_hm1");
  const Symbol lap = laplacian_symbol(f.grid());
  const auto s = lap.values();
  const Field g = spectral_map(f, [&](std::size_t i, Complex c) {
    return i == 0 ? Complex(0.0, 0.0) : c / std::sqrt(-s[i]);
  });
  return norm_l2(g);
}

}  // namespace nch
