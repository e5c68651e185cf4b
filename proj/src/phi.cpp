#include "nch/phi.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "nch/error.hpp"

namespace nch {

namespace {

constexpr int series_terms = 26;

// c[j] = 1 / (j + offset)!
template <int Offset>
constexpr std::array<double, series_terms> inverse_factorials() {
  std::array<double, series_terms> c{};
  double f = 1.0;  // (Offset - 1)!
  for (int i = 2; i < Offset; ++i) f *= i;
  for (int j = 0; j < series_terms; ++j) {
    f *= static_cast<double>(j + Offset);
    c[static_cast<std::size_t>(j)] = 1.0 / f;
  }
  return c;
}

constexpr auto phi0_coeffs = inverse_factorials<1>();
constexpr auto phi1_coeffs = inverse_factorials<2>();

// sum_j c_j (-a)^j by Horner's rule.
double alternating_series(const std::array<double, series_terms>& c, double a) {
  double s = c[series_terms - 1];
  for (int j = series_terms - 2; j >= 0; --j) s = c[static_cast<std::size_t>(j)] - a * s;
  return s;
}

void require_nonnegative(double a, const char* name) {
  if (!(a >= 0.0)) {
    std::ostringstream os;
    os << name << ": argument must be >= 0, got " << a;
    throw DomainError(os.str());
  }
}

}  // namespace

double phi_m1(double a) {
  require_nonnegative(a, "phi_m1");
  return std::exp(-a);
}

double phi0_series(double a) { return alternating_series(phi0_coeffs, a); }
double phi0_closed(double a) { return -std::expm1(-a) / a; }
double phi1_series(double a) { return alternating_series(phi1_coeffs, a); }
double phi1_closed(double a) { return (a + std::expm1(-a)) / (a * a); }

double phi0(double a) {
  require_nonnegative(a, "phi0");
  return a < phi_series_threshold ? phi0_series(a) : phi0_closed(a);
}

double phi1(double a) {
  require_nonnegative(a, "phi1");
  return a < phi_series_threshold ? phi1_series(a) : phi1_closed(a);
}

}  // namespace nch
