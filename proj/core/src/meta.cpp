#include "symlik/meta.hpp"

#include <cmath>
#include <stdexcept>

#include "symlik/special.hpp"
#include "symlik/symbols.hpp"

namespace symlik {

namespace {

void check_quantiles(const Quantiles5& q, int n, bool strict) {
  if (n < 5) throw std::invalid_argument("meta estimator: n must be >= 5");
  for (int i = 1; i < 5; ++i) {
    if (strict ? !(q[i] > q[i - 1]) : !(q[i] >= q[i - 1]))
      throw std::invalid_argument("meta estimator: quantiles must be monotone");
  }
}

}  // namespace

std::string meta_method_name(MetaMethod m) {
  switch (m) {
    case MetaMethod::Luo: return "luo";
    case MetaMethod::Wan: return "wan";
    case MetaMethod::Shi: return "shi";
    case MetaMethod::SymbolicNormal: return "symbolic-normal";
    case MetaMethod::SymbolicLogNormal: return "symbolic-lognormal";
  }
  return "?";
}

double meta_mean_luo(const Quantiles5& q, int n) {
  check_quantiles(q, n, /*strict=*/false);
  const double w1 = 2.2 / (2.2 + std::pow(n, 0.75));
  const double w2 = 0.7 - 0.72 / std::pow(n, 0.55);
  return w1 * (q[0] + q[4]) / 2.0 + w2 * (q[1] + q[3]) / 2.0 + (1.0 - w1 - w2) * q[2];
}

double meta_sd_wan(const Quantiles5& q, int n) {
  check_quantiles(q, n, /*strict=*/false);
  const double zeta = 2.0 * norm_quantile((n - 0.375) / (n + 0.25));
  const double eta = 2.0 * norm_quantile((0.75 * n - 0.125) / (n + 0.25));
  return 0.5 * ((q[4] - q[0]) / zeta + (q[3] - q[1]) / eta);
}

double meta_sd_shi(const Quantiles5& q, int n) {
  check_quantiles(q, n, /*strict=*/false);
  const double z1 = norm_quantile((n - 0.375) / (n + 0.25));
  const double z2 = norm_quantile((0.75 * n - 0.125) / (n + 0.25));
  const double theta1 = (2.0 + 0.14 * std::pow(n, 0.6)) * z1;
  const double theta2 = (2.0 + 2.0 / (0.07 * std::pow(n, 0.6))) * z2;
  return (q[4] - q[0]) / theta1 + (q[3] - q[1]) / theta2;
}

FitOptions meta_fit_options() {
  FitOptions o;
  o.tol = 1e-13;
  o.max_iter = 20000;
  return o;
}

MetaEstimates meta_symbolic(const Quantiles5& q, int n, FamilyId base_family,
                            const FitOptions& options) {
  check_quantiles(q, n, /*strict=*/true);
  if (n % 4 != 1) throw std::invalid_argument("meta_symbolic: n must be 4Q+1");
  if (base_family != FamilyId::Normal1D && base_family != FamilyId::LogNormal1D)
    throw std::invalid_argument("meta_symbolic: base family must be normal or lognormal");
  const int Q = (n - 1) / 4;

  RandomBinHistogramSymbol sym;
  sym.n = n;
  sym.k = {1, Q + 1, 2 * Q + 1, 3 * Q + 1, n};
  sym.s.assign(q.begin(), q.end());

  std::vector<double> theta0;
  if (base_family == FamilyId::Normal1D) {
    theta0 = {q[2], std::max(1e-8, (q[4] - q[0]) / 4.0)};
  } else {
    if (q[0] <= 0.0)
      throw std::invalid_argument("meta_symbolic: lognormal base needs positive quantiles");
    theta0 = {std::log(q[2]), std::max(1e-8, (std::log(q[4]) - std::log(q[0])) / 4.0)};
  }

  std::vector<Symbol> symbols{sym};
  FitResult fit = fit_mle(symbols, base_family, theta0, options);

  MetaEstimates out;
  const double rescale = std::sqrt(static_cast<double>(n) / (n - 1.0));
  if (base_family == FamilyId::Normal1D) {
    out.method = MetaMethod::SymbolicNormal;
    out.mean_hat = fit.theta_hat[0];
    out.sd_hat = rescale * fit.theta_hat[1];
  } else {
    out.method = MetaMethod::SymbolicLogNormal;
    const double mu = fit.theta_hat[0], s2 = fit.theta_hat[1] * fit.theta_hat[1];
    const double pop_mean = std::exp(mu + s2 / 2.0);
    const double pop_sd = pop_mean * std::sqrt(std::expm1(s2));
    out.mean_hat = pop_mean;
    out.sd_hat = rescale * pop_sd;
  }
  return out;
}

}  // namespace symlik
