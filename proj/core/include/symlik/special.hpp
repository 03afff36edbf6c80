#pragma once

// Scalar special functions used throughout the library: standard normal
// density/distribution, its inverse, Owen's T, and the bivariate normal
// distribution function.

namespace symlik {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Standard normal density and its log.
double norm_pdf(double x) noexcept;
double norm_log_pdf(double x) noexcept;

// Standard normal distribution function, accurate in both tails.
double norm_cdf(double x) noexcept;

// log(Phi(x)), usable far into the lower tail (x ~ -40 and beyond).
double norm_log_cdf(double x) noexcept;

// Inverse of the standard normal distribution function (Wichura's
// algorithm AS 241, rational approximations accurate to ~1e-16).
// Requires p in (0, 1).
double norm_quantile(double p);

// Owen's T function T(h, a), evaluated by Gauss-Legendre integration of
// exp(-h^2(1+t^2)/2) / (2*pi*(1+t^2)) on [0, a] after the usual
// reductions to |a| <= 1.
double owens_t(double h, double a) noexcept;

// P(Z1 <= x, Z2 <= y) for standard bivariate normal with correlation rho.
// Hybrid Gauss-Legendre scheme of Genz (2004); absolute accuracy ~5e-16.
// Accepts rho in [-1, 1] and infinite arguments.
double bvn_cdf(double x, double y, double rho) noexcept;

}  // namespace symlik
