#pragma once

namespace nch {

/// Below this argument phi0 and phi1 are summed from their Taylor series;
/// above it the closed forms (written with expm1) are used. Both branches
/// are accurate to about 1e-15 relative at the switch.
inline constexpr double phi_series_threshold = 1.0;

/// phi_{-1}(a) = exp(-a)
double phi_m1(double a);
/// phi_0(a) = (1 - exp(-a)) / a, phi_0(0) = 1
double phi0(double a);
/// phi_1(a) = (a - 1 + exp(-a)) / a^2, phi_1(0) = 1/2
double phi1(double a);

/// Single-branch evaluations, exposed so the switch can be tested.
double phi0_series(double a);
double phi0_closed(double a);
double phi1_series(double a);
double phi1_closed(double a);

}  // namespace nch
