#include "symlik/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "symlik/gauss.hpp"

namespace symlik {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double norm_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double norm_log_pdf(double x) noexcept { return -0.5 * x * x - kLogSqrt2Pi; }

double norm_cdf(double x) noexcept {
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return 0.5 * std::erfc(-x / kSqrt2);
}

double norm_log_cdf(double x) noexcept {
  if (x == kInf) return 0.0;
  // erfc keeps full precision until it underflows near x = -37.5.
  if (x > -36.0) return std::log(norm_cdf(x));
  if (x == -kInf) return -kInf;
  // Asymptotic expansion of Mills' ratio in the deep lower tail.
  const double z = -x;
  const double z2 = z * z;
  double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
                  105.0 / (z2 * z2 * z2 * z2);
  return norm_log_pdf(x) - std::log(z) + std::log(series);
}

double norm_quantile(double p) {
  // Wichura (1988), algorithm AS 241, PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_quantile: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.76949722146069140550) * r +
            4.63033784615654529590) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580) * r +
            5.46378491116411436990) * r + 6.65790464350110377720) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

namespace {

// T(h, a) for 0 <= a <= 1 by quadrature; the integrand is smooth on [0, 1].
double owens_t_core(double h, double a) {
  const double hs = -0.5 * h * h;
  return integrate_gl(
             [hs](double t) {
               const double u = 1.0 + t * t;
               return std::exp(hs * u) / u;
             },
             0.0, a, 32) /
         (2.0 * kPi);
}

}  // namespace

double owens_t(double h, double a) noexcept {
  if (a == 0.0 || std::isnan(a) || std::isnan(h)) return a == 0.0 ? 0.0 : a;
  const double sign = (a < 0.0) ? -1.0 : 1.0;
  const double aa = std::abs(a);
  const double hh = std::abs(h);
  double t;
  if (aa <= 1.0) {
    t = owens_t_core(hh, aa);
  } else if (aa == kInf) {
    t = 0.5 * norm_cdf(-hh);
  } else {
    // T(h,a) = Phi(h)/2 + Phi(ah)/2 - Phi(h)Phi(ah) - T(ah, 1/a), a > 0.
    const double ah = aa * hh;
    const double ph = norm_cdf(hh), pah = norm_cdf(ah);
    t = 0.5 * ph + 0.5 * pah - ph * pah - owens_t_core(ah, 1.0 / aa);
    if (hh == 0.0) t = std::atan(aa) / (2.0 * kPi);
  }
  return sign * t;
}

namespace {

// P(Z1 > h, Z2 > k) for standardized margins; Genz (2004) hybrid scheme.
double bvn_upper(double h, double k, double rho) {
  const QuadratureRule& rule = gauss_legendre(std::abs(rho) < 0.3   ? 6
                                              : std::abs(rho) < 0.75 ? 12
                                                                     : 20);
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(rho) < 0.925) {
    if (std::abs(rho) > 0.0) {
      const double hs = 0.5 * (h * h + k * k);
      const double asr = std::asin(rho);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double sn = std::sin(0.5 * asr * (rule.nodes[i] + 1.0));
        bvn += rule.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
      bvn *= asr / (4.0 * kPi);
    }
    bvn += norm_cdf(-h) * norm_cdf(-k);
    return bvn;
  }
  if (rho < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(rho) < 1.0) {
    const double as = (1.0 - rho) * (1.0 + rho);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0)
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-0.5 * hk) * kSqrt2Pi * norm_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = a * (rule.nodes[i] + 1.0);
      const double xs = x * x;
      const double rs = std::sqrt(1.0 - xs);
      asr = -0.5 * (bs / xs + hk);
      if (asr > -100.0) {
        bvn += a * rule.weights[i] * std::exp(asr) *
               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                (1.0 + c * xs * (1.0 + d * xs)));
      }
    }
    bvn /= -(2.0 * kPi);
  }
  if (rho > 0.0) {
    bvn += norm_cdf(-std::max(h, k));
  } else {
    bvn = -bvn;
    if (k > h) {
      if (h >= 0.0)
        bvn += norm_cdf(-h) - norm_cdf(-k);
      else
        bvn += norm_cdf(k) - norm_cdf(h);
    }
  }
  return bvn;
}

}  // namespace

double bvn_cdf(double x, double y, double rho) noexcept {
  if (x == -kInf || y == -kInf) return 0.0;
  if (x == kInf && y == kInf) return 1.0;
  if (x == kInf) return norm_cdf(y);
  if (y == kInf) return norm_cdf(x);
  if (rho >= 1.0) return norm_cdf(std::min(x, y));
  if (rho <= -1.0) return std::max(0.0, norm_cdf(x) + norm_cdf(y) - 1.0);
  const double p = bvn_upper(-x, -y, rho);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace symlik
