#include "symlik/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "symlik/meta.hpp"
#include "symlik/parallel.hpp"
#include "symlik/symbols.hpp"

namespace symlik {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
  return {mean, sd};
}

}  // namespace

Symbol build_symbol(const SymbolSpec& spec, const DataMatrix& X) {
  if (spec.type == "interval") {
    if (spec.l.size() != 1 || spec.u.size() != 1)
      throw std::invalid_argument("symbol spec: interval needs scalar l and u");
    return make_interval(X.column(0), spec.l[0], spec.u[0]);
  }
  if (spec.type == "rect_minmax") return make_rect_minmax(X);
  if (spec.type == "rect_order") {
    if (spec.construction == "marginal") return make_rect_marginal(X, spec.l, spec.u);
    if (spec.construction == "seq_nest")
      return make_rect_seq_nest(X, spec.l, spec.u, spec.axis_order);
    if (spec.construction == "iter_seg")
      return make_rect_iter_seg(X, spec.l, spec.u, spec.axis_order);
    throw std::invalid_argument("symbol spec: unknown construction '" + spec.construction +
                                "'");
  }
  if (spec.type == "hist_fixed") return make_hist_fixed(X, spec.grids);
  if (spec.type == "hist_random") return make_hist_random(X.column(0), spec.k);
  throw std::invalid_argument("symbol spec: unknown type '" + spec.type + "'");
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.T < 1) throw std::invalid_argument("run_experiment: T must be >= 1");
  const Family truth(cfg.family, cfg.theta0);
  const auto t0 = Clock::now();

  struct ReplicateOutcome {
    bool ok = false;
    std::vector<double> theta_hat;
  };

  FitOptions fit_options = cfg.fit;
  fit_options.eval.rect_mode = cfg.rect_mode;
  fit_options.eval.mc_samples = cfg.mc_samples;

  RngStream master(cfg.master_seed);
  auto one_replicate = [&](int r) -> ReplicateOutcome {
    RngStream stream = master.derive(static_cast<std::uint64_t>(r));
    std::vector<Symbol> symbols;
    symbols.reserve(cfg.m);
    try {
      for (int c = 0; c < cfg.m; ++c) {
        DataMatrix X = truth.sample(cfg.n_c, stream);
        symbols.push_back(build_symbol(cfg.symbol, X));
      }
      FitOptions opts = fit_options;
      opts.eval.mc_seed = stream.derive(0x900dull).seed();
      FitResult fit = fit_mle(symbols, cfg.family, cfg.theta0, opts);
      if (!fit.converged) return {};
      return {true, fit.theta_hat};
    } catch (const std::exception&) {
      return {};
    }
  };

  auto outcomes = parallel_map<ReplicateOutcome>(cfg.T, cfg.threads, one_replicate);

  ExperimentSummary out;
  out.param_names = truth.param_names();
  const int np = truth.n_params();
  std::vector<std::vector<double>> per_param(np);
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++out.failures;
      continue;
    }
    out.estimates.push_back(o.theta_hat);
    for (int j = 0; j < np; ++j) per_param[j].push_back(o.theta_hat[j]);
  }
  out.replicates = static_cast<int>(out.estimates.size());
  out.mean.resize(np, 0.0);
  if (out.replicates > 0) {
    std::vector<double> sd(np);
    for (int j = 0; j < np; ++j) {
      auto [m, s] = mean_sd(per_param[j]);
      out.mean[j] = m;
      sd[j] = s;
    }
    if (out.replicates > 1) out.sd = std::move(sd);
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

RmseCurve run_rmse_study(const RmseConfig& cfg) {
  if (cfg.n % 4 != 1 || cfg.n < 5)
    throw std::invalid_argument("run_rmse_study: n must be 4Q+1");
  const int n = cfg.n;
  const int Q = (n - 1) / 4;
  const int half = 2 * Q;  // i = 1..2Q
  const auto t0 = Clock::now();
  const Family truth = Family::normal(cfg.mu0, cfg.sigma0);

  // Per replicate and grid point, the rescaled MLEs for both symbol
  // kinds, plus the classical sample statistics.
  struct ReplicateRow {
    std::vector<double> mu_int, sig_int, mu_hist, sig_hist;
    double xbar = 0.0, s = 0.0;
  };

  const double rescale = std::sqrt(static_cast<double>(n) / (n - 1.0));
  RngStream master(cfg.master_seed);
  auto one_replicate = [&](int t) -> ReplicateRow {
    RngStream stream = master.derive(static_cast<std::uint64_t>(t));
    DataMatrix X = truth.sample(n, stream);
    auto x = X.column(0);
    ReplicateRow row;
    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - xbar) * (v - xbar);
    row.xbar = xbar;
    row.s = std::sqrt(ss / (n - 1));
    row.mu_int.resize(half);
    row.sig_int.resize(half);
    row.mu_hist.resize(half);
    row.sig_hist.resize(half);
    std::sort(x.begin(), x.end());
    for (int i = 1; i <= half; ++i) {
      const int lo = i, hi = n + 1 - i;
      const std::vector<double> theta0 = {xbar, std::max(1e-8, row.s)};
      IntervalSymbol interval{.s_l = x[lo - 1], .s_u = x[hi - 1], .n = n, .l = lo, .u = hi};
      std::vector<Symbol> sym1{interval};
      FitResult f1 = fit_mle(sym1, FamilyId::Normal1D, theta0, {});
      row.mu_int[i - 1] = f1.theta_hat[0];
      row.sig_int[i - 1] = rescale * f1.theta_hat[1];

      RandomBinHistogramSymbol hist;
      hist.n = n;
      hist.k = {lo, 2 * Q + 1, hi};
      hist.s = {x[lo - 1], x[2 * Q], x[hi - 1]};
      std::vector<Symbol> sym2{hist};
      FitResult f2 = fit_mle(sym2, FamilyId::Normal1D, theta0, {});
      row.mu_hist[i - 1] = f2.theta_hat[0];
      row.sig_hist[i - 1] = rescale * f2.theta_hat[1];
    }
    return row;
  };

  auto rows = parallel_map<ReplicateRow>(cfg.T, cfg.threads, one_replicate);

  double denom_mu = 0.0, denom_sigma = 0.0;
  for (const auto& r : rows) {
    denom_mu += (r.xbar - cfg.mu0) * (r.xbar - cfg.mu0);
    denom_sigma += (r.s - cfg.sigma0) * (r.s - cfg.sigma0);
  }

  RmseCurve curve;
  curve.config = cfg;
  curve.classical_rmse_mu = denom_mu / denom_mu;
  curve.classical_rmse_sigma = denom_sigma / denom_sigma;
  for (int i = 1; i <= half; ++i) {
    RmsePoint p;
    p.i = i;
    p.q = static_cast<double>(n + 1 - i) / n;
    double mu_i = 0, sg_i = 0, mu_h = 0, sg_h = 0;
    for (const auto& r : rows) {
      mu_i += (r.mu_int[i - 1] - cfg.mu0) * (r.mu_int[i - 1] - cfg.mu0);
      sg_i += (r.sig_int[i - 1] - cfg.sigma0) * (r.sig_int[i - 1] - cfg.sigma0);
      mu_h += (r.mu_hist[i - 1] - cfg.mu0) * (r.mu_hist[i - 1] - cfg.mu0);
      sg_h += (r.sig_hist[i - 1] - cfg.sigma0) * (r.sig_hist[i - 1] - cfg.sigma0);
    }
    p.rmse_mu_interval = mu_i / denom_mu;
    p.rmse_sigma_interval = sg_i / denom_sigma;
    p.rmse_mu_hist = mu_h / denom_mu;
    p.rmse_sigma_hist = sg_h / denom_sigma;
    curve.points.push_back(p);
  }
  curve.wall_seconds = seconds_since(t0);
  return curve;
}

MetaBiasTable run_meta_bias_study(const MetaBiasConfig& cfg) {
  if (cfg.population != FamilyId::Normal1D && cfg.population != FamilyId::LogNormal1D)
    throw std::invalid_argument("run_meta_bias_study: population must be normal or lognormal");
  const Family truth(cfg.population, cfg.theta0);
  const bool lognormal = cfg.population == FamilyId::LogNormal1D;
  const auto t0 = Clock::now();

  MetaBiasTable table;
  table.config = cfg;
  for (int Q : cfg.q_grid) {
    const int n = 4 * Q + 1;
    struct Errors {
      double luo = 0, wan = 0, shi = 0, sym_mean = 0, sym_sd = 0;
      double sym_ln_mean = 0, sym_ln_sd = 0;
      bool ok = true;
    };
    RngStream master = RngStream(cfg.master_seed).derive(static_cast<std::uint64_t>(n));
    auto one = [&](int t) -> Errors {
      RngStream stream = master.derive(static_cast<std::uint64_t>(t));
      DataMatrix X = truth.sample(n, stream);
      auto x = X.column(0);
      const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : x) ss += (v - xbar) * (v - xbar);
      const double s = std::sqrt(ss / (n - 1));
      std::sort(x.begin(), x.end());
      Quantiles5 q = {x[0], x[Q], x[2 * Q], x[3 * Q], x[n - 1]};
      Errors e;
      try {
        e.luo = meta_mean_luo(q, n) - xbar;
        e.wan = meta_sd_wan(q, n) - s;
        e.shi = meta_sd_shi(q, n) - s;
        MetaEstimates sym = meta_symbolic(q, n, FamilyId::Normal1D);
        e.sym_mean = sym.mean_hat - xbar;
        e.sym_sd = sym.sd_hat - s;
        if (lognormal) {
          MetaEstimates sym_ln = meta_symbolic(q, n, FamilyId::LogNormal1D);
          e.sym_ln_mean = sym_ln.mean_hat - xbar;
          e.sym_ln_sd = sym_ln.sd_hat - s;
        }
      } catch (const std::exception&) {
        e.ok = false;
      }
      return e;
    };
    auto errs = parallel_map<Errors>(cfg.T, cfg.threads, one);

    auto emit = [&](const std::string& method, const std::string& stat,
                    auto getter) {
      std::vector<double> v;
      for (const auto& e : errs)
        if (e.ok) v.push_back(getter(e));
      if (v.empty()) return;
      auto [mean, sd] = mean_sd(v);
      table.rows.push_back(
          {n, method, stat, mean, sd / std::sqrt(static_cast<double>(v.size()))});
    };
    emit("luo", "mean", [](const Errors& e) { return e.luo; });
    emit("wan", "sd", [](const Errors& e) { return e.wan; });
    emit("shi", "sd", [](const Errors& e) { return e.shi; });
    emit("symbolic-normal", "mean", [](const Errors& e) { return e.sym_mean; });
    emit("symbolic-normal", "sd", [](const Errors& e) { return e.sym_sd; });
    if (lognormal) {
      emit("symbolic-lognormal", "mean", [](const Errors& e) { return e.sym_ln_mean; });
      emit("symbolic-lognormal", "sd", [](const Errors& e) { return e.sym_ln_sd; });
    }
  }
  table.wall_seconds = seconds_since(t0);
  return table;
}

}  // namespace symlik
