#include <immintrin.h>

#include <cmath>

#include "nch/kernels.hpp"

namespace nch::kernels {

namespace {

bool cubic_fkappa(const double* u, double* out, std::size_t n, double kappa) {
  const __m256d k = _mm256_set1_pd(kappa);
  const __m256d zero = _mm256_setzero_pd();
  // x*0 == 0 holds exactly for finite x; inf and nan give nan.
  __m256d finite = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(u + i);
    const __m256d cube = _mm256_mul_pd(_mm256_mul_pd(v, v), v);
    const __m256d r = _mm256_sub_pd(_mm256_sub_pd(cube, v), _mm256_mul_pd(k, v));
    _mm256_storeu_pd(out + i, r);
    finite = _mm256_and_pd(finite, _mm256_cmp_pd(_mm256_mul_pd(r, zero), zero, _CMP_EQ_OQ));
  }
  bool ok = _mm256_movemask_pd(finite) == 0xF;
  for (; i < n; ++i) {
    const double v = u[i];
    const double r = (v * v * v - v) - kappa * v;
    out[i] = r;
    ok &= std::isfinite(r);
  }
  return ok;
}

void axpby(const double* a, const double* x, const double* b, const double* y, double* out,
           std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) out[i] = a[i] * x[i] + b[i] * y[i];
}

void axpbypcz(const double* a, const double* x, const double* b, const double* y, const double* c,
              const double* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(y + i));
    const __m256d cz = _mm256_mul_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_add_pd(ax, by), cz));
  }
  for (; i < n; ++i) out[i] = (a[i] * x[i] + b[i] * y[i]) - c[i] * z[i];
}

void scale(const double* a, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * x[i];
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::avx2, cubic_fkappa, axpby, axpbypcz, scale};
  return &table;
}

}  // namespace nch::kernels
