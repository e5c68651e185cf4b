#include <cmath>

#include "nch/kernels.hpp"

namespace nch::kernels {

namespace {

bool cubic_fkappa(const double* u, double* out, std::size_t n, double kappa) {
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = u[i];
    const double r = (v * v * v - v) - kappa * v;
    out[i] = r;
    finite &= std::isfinite(r);
  }
  return finite;
}

void axpby(const double* a, const double* x, const double* b, const double* y, double* out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * x[i] + b[i] * y[i];
}

void axpbypcz(const double* a, const double* x, const double* b, const double* y, const double* c,
              const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] * x[i] + b[i] * y[i]) - c[i] * z[i];
}

void scale(const double* a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, cubic_fkappa, axpby, axpbypcz, scale};
  return table;
}

}  // namespace nch::kernels
