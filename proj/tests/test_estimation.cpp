#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symlik/fit.hpp"
#include "symlik/special.hpp"
#include "symlik/meta.hpp"
#include "symlik/symbols.hpp"

using namespace symlik;

namespace {

std::pair<double, double> sample_stats(const std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (x.size() - 1))};
}

}  // namespace

TEST_SUITE_BEGIN("estimation");

TEST_CASE("unconstrained transforms round trip") {
  for (auto id : {FamilyId::Normal1D, FamilyId::LogNormal1D, FamilyId::SkewNormal1D,
                  FamilyId::BivariateNormal, FamilyId::Uniform1D}) {
    std::vector<double> theta;
    switch (id) {
      case FamilyId::Normal1D:
      case FamilyId::LogNormal1D: theta = {0.7, 2.3}; break;
      case FamilyId::SkewNormal1D: theta = {0.7, 2.3, -0.4}; break;
      case FamilyId::BivariateNormal: theta = {1.0, -2.0, 0.5, 3.0, -0.6}; break;
      case FamilyId::Uniform1D: theta = {-1.0, 4.0}; break;
    }
    auto z = to_unconstrained(id, theta);
    auto back = to_constrained(id, z);
    for (std::size_t j = 0; j < theta.size(); ++j)
      CHECK(back[j] == doctest::Approx(theta[j]).epsilon(1e-12));
    CHECK(transform_names(id).size() == theta.size());
  }
}

TEST_CASE("classical-limit fit recovers sample statistics") {
  RngStream rng(11);
  const Family truth = Family::normal(50.0, 17.0);
  const int n = 41;
  DataMatrix X = truth.sample(n, rng);
  auto x = X.column(0);
  std::vector<int> k(n);
  std::iota(k.begin(), k.end(), 1);
  std::vector<Symbol> symbols{make_hist_random(x, k)};

  FitOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 20000;
  FitResult fit = fit_mle(symbols, FamilyId::Normal1D, {40.0, 10.0}, opts);
  auto [mean, sd] = sample_stats(x);
  const double sigma_mle = std::sqrt((n - 1.0) / n) * sd;
  CHECK(std::abs(fit.theta_hat[0] - mean) < 1e-6 * std::abs(mean));
  CHECK(std::abs(fit.theta_hat[1] - sigma_mle) < 1e-6 * sigma_mle);
}

TEST_CASE("uniform width MLE has the closed form n*s_u/u") {
  // Interval-likelihood score for uniform(0,w): d/dw log L = -n/w + (n-u)/(w - s_u),
  // zero at w = n s_u / u.
  RngStream rng(13);
  const Family truth = Family::uniform(0.0, 3.0);
  DataMatrix X = truth.sample(25, rng);
  auto sym = make_interval(X.column(0), 4, 21);
  std::vector<Symbol> symbols{sym};

  FitOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 20000;
  opts.fixed = {true, false};  // lower bound pinned at 0
  FitResult fit = fit_mle(symbols, FamilyId::Uniform1D, {0.0, 4.0}, opts);
  const double closed_form = 25.0 * sym.s_u / 21.0;
  CHECK(fit.theta_hat[0] == 0.0);
  CHECK(fit.theta_hat[1] == doctest::Approx(closed_form).epsilon(1e-6));

  // Grid-search oracle over w.
  double best_w = 0, best = -1e300;
  for (double w = sym.s_u + 1e-6; w < 6.0; w += 1e-4) {
    const double v = loglik_interval(sym, Family::uniform(0.0, w)).value;
    if (v > best) {
      best = v;
      best_w = w;
    }
  }
  CHECK(std::abs(best_w - closed_form) < 2e-4);
}

TEST_CASE("fit is invariant to symbol order") {
  RngStream rng(17);
  const Family truth = Family::normal(0, 1);
  std::vector<Symbol> symbols;
  for (int c = 0; c < 6; ++c) {
    DataMatrix X = truth.sample(9, rng);
    symbols.push_back(make_interval(X.column(0), 2, 8));
  }
  std::vector<Symbol> reversed(symbols.rbegin(), symbols.rend());
  FitResult a = fit_mle(symbols, FamilyId::Normal1D, {0.2, 1.3}, {});
  FitResult b = fit_mle(reversed, FamilyId::Normal1D, {0.2, 1.3}, {});
  CHECK(a.theta_hat[0] == doctest::Approx(b.theta_hat[0]).epsilon(1e-10));
  CHECK(a.theta_hat[1] == doctest::Approx(b.theta_hat[1]).epsilon(1e-10));
}

TEST_CASE("local optimum property at the fitted point") {
  RngStream rng(19);
  const Family truth = Family::normal(3.0, 2.0);
  std::vector<Symbol> symbols;
  for (int c = 0; c < 10; ++c) {
    DataMatrix X = truth.sample(15, rng);
    symbols.push_back(make_interval(X.column(0), 3, 13));
  }
  FitOptions opts;
  FitResult fit = fit_mle(symbols, FamilyId::Normal1D, {2.0, 1.0}, opts);
  const double base = fit.loglik_at_max;
  auto z_hat = to_unconstrained(FamilyId::Normal1D, fit.theta_hat);
  for (std::size_t j = 0; j < z_hat.size(); ++j) {
    for (double sgn : {-1.0, 1.0}) {
      auto z = z_hat;
      z[j] += sgn * std::sqrt(opts.tol);
      auto fam = Family::try_make(FamilyId::Normal1D,
                                  to_constrained(FamilyId::Normal1D, z));
      REQUIRE(fam.has_value());
      CHECK(dataset_loglik(symbols, *fam).value <= base + 10.0 * opts.tol);
    }
  }
}

TEST_CASE("zero-probability start raises a numerical error") {
  IntervalSymbol sym{0.5, 2.5, 8, 1, 8};
  std::vector<Symbol> symbols{sym};
  // Uniform(0,1) puts zero density at s_u = 2.5.
  FitOptions opts;
  opts.fixed = {true, false};
  CHECK_THROWS_AS(fit_mle(symbols, FamilyId::Uniform1D, {0.0, 1.0}, opts),
                  NumericalError);
}

TEST_CASE("stderr from the numerical Hessian") {
  RngStream rng(23);
  const Family truth = Family::normal(10.0, 3.0);
  const int n = 400;
  DataMatrix X = truth.sample(n, rng);
  auto x = X.column(0);
  std::vector<int> k(n);
  std::iota(k.begin(), k.end(), 1);
  std::vector<Symbol> symbols{make_hist_random(x, k)};
  FitOptions opts;
  opts.tol = 1e-12;
  FitResult fit = fit_mle(symbols, FamilyId::Normal1D, {9.0, 2.0}, opts);
  auto se = stderr_hessian(fit, symbols, FamilyId::Normal1D);
  REQUIRE(se.has_value());
  // Fisher information oracle: se(mu) = sigma/sqrt(n).
  const double expected = fit.theta_hat[1] / std::sqrt(static_cast<double>(n));
  CHECK(std::abs((*se)[0] - expected) < 0.02 * expected);

  // Exchangeable margins give symmetric standard errors.
  RngStream rng2(29);
  const Family biv = Family::bivariate_normal(0, 0, 1, 1, 0.0);
  std::vector<Symbol> boxes;
  for (int c = 0; c < 40; ++c) {
    DataMatrix Y = biv.sample(30, rng2);
    boxes.push_back(make_rect_minmax(Y));
  }
  FitResult bf = fit_mle(boxes, FamilyId::BivariateNormal, {0, 0, 1, 1, 0.0}, {});
  auto bse = stderr_hessian(bf, boxes, FamilyId::BivariateNormal);
  REQUIRE(bse.has_value());
  CHECK((*bse)[0] == doctest::Approx((*bse)[1]).epsilon(0.35));
  CHECK((*bse)[2] == doctest::Approx((*bse)[3]).epsilon(0.35));
}

TEST_CASE("meta mean estimator") {
  // Symmetric quantiles collapse every average onto the median.
  CHECK(meta_mean_luo({1, 2, 3, 4, 5}, 9) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(meta_mean_luo({1, 2, 3, 4, 5}, 81) == doctest::Approx(3.0).epsilon(1e-14));
  // Arbitrary-precision reference for q=(0,1,2,4,10), n=17.
  CHECK(meta_mean_luo({0, 1, 2, 4, 10}, 17) ==
        doctest::Approx(2.89850190064372765).epsilon(1e-14));
  // Weight limits: (w1, w2) -> (0, 0.7).
  const double big_n = 1e9;
  const double w1 = 2.2 / (2.2 + std::pow(big_n, 0.75));
  CHECK(w1 < 1e-5);
  CHECK_THROWS_AS(meta_mean_luo({3, 2, 1, 4, 5}, 9), std::invalid_argument);
}

TEST_CASE("meta sd estimators") {
  // Arbitrary-precision references for q=(30,40,50,60,70), n=21.
  CHECK(meta_sd_wan({30, 40, 50, 60, 70}, 21) ==
        doctest::Approx(13.2427137511916698).epsilon(1e-13));
  CHECK(meta_sd_shi({30, 40, 50, 60, 70}, 21) ==
        doctest::Approx(12.1960461675695592).epsilon(1e-13));
  // Scaling the quantile gaps scales both estimates.
  const double base = meta_sd_wan({30, 40, 50, 60, 70}, 21);
  CHECK(meta_sd_wan({60, 80, 100, 120, 140}, 21) ==
        doctest::Approx(2.0 * base).epsilon(1e-13));
  // With exact normal order-statistic quantiles both converge to sigma.
  const double sigma = 2.5;
  double prev_err_shi = 1e9;
  for (int n : {21, 201, 2001, 20001}) {
    const double z_ext = norm_quantile((n - 0.375) / (n + 0.25));
    const double z_iqr = norm_quantile((0.75 * n - 0.125) / (n + 0.25));
    Quantiles5 q = {-sigma * z_ext, -sigma * z_iqr, 0.0, sigma * z_iqr, sigma * z_ext};
    const double err_wan = std::abs(meta_sd_wan(q, n) - sigma);
    const double err_shi = std::abs(meta_sd_shi(q, n) - sigma);
    CHECK(err_wan < 1e-12);  // Wan is exact under plug-in quantiles
    CHECK(err_shi <= prev_err_shi);
    prev_err_shi = err_shi;
  }
}

TEST_CASE("symbolic meta estimator is exact at n=5") {
  RngStream rng(31);
  const Family truth = Family::normal(50, 17);
  for (int rep = 0; rep < 20; ++rep) {
    DataMatrix X = truth.sample(5, rng);
    auto x = X.column(0);
    std::sort(x.begin(), x.end());
    Quantiles5 q = {x[0], x[1], x[2], x[3], x[4]};
    auto est = meta_symbolic(q, 5, FamilyId::Normal1D);
    auto [mean, sd] = sample_stats(x);
    CHECK(std::abs(est.mean_hat - mean) < 1e-6 * std::max(1.0, std::abs(mean)));
    CHECK(std::abs(est.sd_hat - sd) < 1e-6 * sd);
  }
}

TEST_CASE("grid refinement drives fixed-bin MLEs toward classical MLEs") {
  RngStream rng(41);
  const Family truth = Family::normal(3.0, 1.5);
  const int n = 200;
  DataMatrix X = truth.sample(n, rng);

  // Classical MLE via the B=n random-bin construction.
  auto x = X.column(0);
  std::vector<int> k(n);
  std::iota(k.begin(), k.end(), 1);
  std::vector<Symbol> classical{make_hist_random(x, k)};
  FitOptions tight;
  tight.tol = 1e-12;
  FitResult ref = fit_mle(classical, FamilyId::Normal1D, {2.0, 1.0}, tight);

  auto fit_with_bins = [&](int bins) {
    std::vector<double> edges;
    for (int b = 0; b <= bins; ++b)
      edges.push_back(3.0 - 9.0 + 18.0 * b / bins);
    std::vector<Symbol> symbols{make_hist_fixed(X, {edges})};
    FitResult fit = fit_mle(symbols, FamilyId::Normal1D, {2.0, 1.0}, tight);
    return std::hypot(fit.theta_hat[0] - ref.theta_hat[0],
                      fit.theta_hat[1] - ref.theta_hat[1]);
  };
  const double coarse = fit_with_bins(6);
  const double medium = fit_with_bins(24);
  const double fine = fit_with_bins(96);
  CHECK(medium < coarse);
  CHECK(fine < medium);
  CHECK(fine < 0.01);
}

TEST_CASE("symbolic meta estimator with a lognormal base") {
  RngStream rng(37);
  const Family truth = Family::log_normal(4.0, 0.3);
  const int n = 41;  // Q = 10
  DataMatrix X = truth.sample(n, rng);
  auto x = X.column(0);
  std::sort(x.begin(), x.end());
  Quantiles5 q = {x[0], x[10], x[20], x[30], x[40]};
  auto est = meta_symbolic(q, n, FamilyId::LogNormal1D);
  // The mapped population mean/sd must be in the right neighborhood.
  const double pop_mean = std::exp(4.0 + 0.3 * 0.3 / 2.0);
  const double pop_sd = pop_mean * std::sqrt(std::expm1(0.09));
  CHECK(std::abs(est.mean_hat - pop_mean) < 0.3 * pop_mean);
  CHECK(std::abs(est.sd_hat - pop_sd) < 0.5 * pop_sd);
  CHECK_THROWS_AS(meta_symbolic(q, 42, FamilyId::LogNormal1D), std::invalid_argument);
}

TEST_SUITE_END();
