#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symlik/fit.hpp"

namespace symlik {

// How symbols are built from each class's draw in a replicated study.
struct SymbolSpec {
  std::string type;  // interval | rect_minmax | rect_order | hist_fixed | hist_random
  std::vector<int> l, u;              // order indices (interval / rect_order)
  std::vector<int> k;                 // hist_random order indices
  std::vector<std::vector<double>> grids;  // hist_fixed edges
  std::string construction = "marginal";   // rect_order
  std::vector<int> axis_order = {1, 2};
};

struct ExperimentConfig {
  FamilyId family = FamilyId::BivariateNormal;
  std::vector<double> theta0;
  int m = 20;        // classes per replicate
  int n_c = 5;       // rows per class
  int T = 100;       // replicates
  SymbolSpec symbol;
  RectMode rect_mode = RectMode::Full;
  int mc_samples = 100000;  // configuration-probability samples
  std::uint64_t master_seed = 0;
  FitOptions fit;
  int threads = 1;
};

struct ExperimentSummary {
  std::vector<std::string> param_names;
  std::vector<double> mean;              // over converged replicates
  std::optional<std::vector<double>> sd; // absent when < 2 converged
  int replicates = 0;
  int failures = 0;
  double wall_seconds = 0.0;
  std::vector<std::vector<double>> estimates;  // per converged replicate
};

Symbol build_symbol(const SymbolSpec& spec, const DataMatrix& X);

// Replicated draw -> aggregate -> fit study; replicate r uses the stream
// derived from (master_seed, r), so results are bitwise reproducible and
// independent of the worker count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

struct RmseConfig {
  int n = 81;  // 4Q+1
  double mu0 = 50.0, sigma0 = 17.0;
  int T = 2000;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct RmsePoint {
  int i;          // lower order index; interval (i, n+1-i)
  double q;       // (n+1-i)/n
  double rmse_mu_interval, rmse_sigma_interval;
  double rmse_mu_hist, rmse_sigma_hist;
};

struct RmseCurve {
  RmseConfig config;
  std::vector<RmsePoint> points;
  // Identity check: the classical estimator scored against itself.
  double classical_rmse_mu = 1.0, classical_rmse_sigma = 1.0;
  double wall_seconds = 0.0;
};

// Relative root-mean-square-error curves over the symmetric quantile
// grid i = 1..2Q, for interval symbols (i, n+1-i) and the 2-bin random
// histograms that add the median.
RmseCurve run_rmse_study(const RmseConfig& cfg);

struct MetaBiasConfig {
  FamilyId population = FamilyId::Normal1D;  // Normal1D or LogNormal1D
  std::vector<double> theta0 = {50.0, 17.0};
  std::vector<int> q_grid = {1, 2, 3, 4, 5, 10, 20, 30, 40, 50};  // n = 4Q+1
  int T = 10000;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct MetaBiasRow {
  int n;
  std::string method;
  std::string stat;  // "mean" or "sd"
  double bias;       // mean of (estimate - true sample statistic)
  double se;         // standard error of that mean
};

struct MetaBiasTable {
  MetaBiasConfig config;
  std::vector<MetaBiasRow> rows;
  double wall_seconds = 0.0;
};

MetaBiasTable run_meta_bias_study(const MetaBiasConfig& cfg);

}  // namespace symlik
