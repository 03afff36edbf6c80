// symlik: build distributional summaries from micro-data and fit the
// micro-data model from the summaries alone.
//
// Subcommands: aggregate, fit, simulate, meta, oracle-check.
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
// failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symlik/config.hpp"
#include "symlik/csv.hpp"
#include "symlik/experiment.hpp"
#include "symlik/fit.hpp"
#include "symlik/manifest.hpp"
#include "symlik/meta.hpp"
#include "symlik/oracle.hpp"
#include "symlik/parallel.hpp"
#include "symlik/symbol_io.hpp"

namespace {

using namespace symlik;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_theta(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad theta value '" + item + "'");
    }
  }
  return out;
}

FamilyId parse_family(const std::string& name) {
  auto id = family_id_from_name(name);
  if (!id)
    throw std::invalid_argument("unknown family '" + name +
                                "' (normal|lognormal|skewnormal|bivnormal|uniform)");
  return *id;
}

RectMode parse_rect_mode(const std::string& name) {
  if (name == "full") return RectMode::Full;
  if (name == "p4") return RectMode::ForceP4;
  if (name == "marginalized") return RectMode::Marginalized;
  throw std::invalid_argument("unknown likelihood '" + name + "' (full|p4|marginalized)");
}

SymbolSpec symbol_spec_from_config(const Config& cfg) {
  SymbolSpec spec;
  spec.type = cfg.get("symbol", "type");
  if (cfg.has("symbol", "l")) spec.l = cfg.get_ints("symbol", "l");
  if (cfg.has("symbol", "u")) spec.u = cfg.get_ints("symbol", "u");
  if (cfg.has("symbol", "k")) spec.k = cfg.get_ints("symbol", "k");
  if (cfg.has("symbol", "construction"))
    spec.construction = cfg.get("symbol", "construction");
  if (cfg.has("symbol", "axis_order")) spec.axis_order = cfg.get_ints("symbol", "axis_order");
  // Grids: one "grid" key for d=1 or "grid1"/"grid2" for d=2.
  if (cfg.has("symbol", "grid")) {
    spec.grids = {cfg.get_doubles("symbol", "grid")};
  } else if (cfg.has("symbol", "grid1")) {
    spec.grids.push_back(cfg.get_doubles("symbol", "grid1"));
    if (cfg.has("symbol", "grid2")) spec.grids.push_back(cfg.get_doubles("symbol", "grid2"));
  }
  return spec;
}

RunManifest begin_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.version = git_describe_or_unknown();
  m.started_at = iso8601_now();
  return m;
}

void finish_manifest(RunManifest& m, double wall, const std::string& path) {
  m.finished_at = iso8601_now();
  m.wall_seconds = wall;
  m.write(path);
}

// ---------------------------------------------------------------- aggregate

int cmd_aggregate(const std::string& input, const std::string& config_path,
                  const std::string& output) {
  Config cfg = Config::load(config_path);
  SymbolSpec spec = symbol_spec_from_config(cfg);
  DataMatrix all = read_csv_matrix(input);
  all.validate();

  std::vector<Symbol> symbols;
  std::vector<std::string> skipped;
  for (int label : all.distinct_labels()) {
    DataMatrix X = all.has_labels() ? all.rows_for_class(label) : all;
    try {
      symbols.push_back(build_symbol(spec, X));
    } catch (const std::exception& e) {
      skipped.push_back("class " + std::to_string(label) + ": " + e.what());
    }
  }
  write_symbols_file(output, symbols);
  std::cerr << "aggregate: wrote " << symbols.size() << " symbols to " << output << "\n";
  for (const auto& s : skipped) std::cerr << "aggregate: skipped " << s << "\n";
  return skipped.empty() ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------- fit

int cmd_fit(const std::string& input, const std::string& family_name,
            const std::string& theta0_text, const std::string& output,
            const std::string& likelihood, int mc_samples, std::uint64_t seed,
            int max_iter, double tol) {
  const FamilyId family = parse_family(family_name);
  const std::vector<double> theta0 = parse_theta(theta0_text);
  std::vector<Symbol> symbols = read_symbols_file(input);

  FitOptions opts;
  opts.max_iter = max_iter;
  opts.tol = tol;
  opts.eval.rect_mode = parse_rect_mode(likelihood);
  opts.eval.mc_samples = mc_samples;
  opts.eval.mc_seed = seed;
  FitResult fit = fit_mle(symbols, family, theta0, opts);
  auto se = stderr_hessian(fit, symbols, family, opts.eval);

  const Family fitted(family, fit.theta_hat);
  nlohmann::ordered_json j;
  j["family"] = family_name;
  j["param_names"] = fitted.param_names();
  j["theta_hat"] = fit.theta_hat;
  j["loglik_at_max"] = fit.loglik_at_max;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  if (se)
    j["stderr"] = *se;
  else
    j["stderr_diagnostic"] = "negative Hessian not positive definite";
  j["transform_trace"] = fit.transform_trace;
  if (!fit.diagnostics.empty()) j["diagnostics"] = fit.diagnostics;
  if (!output.empty()) {
    std::ofstream f(output);
    if (!f) throw DataError("cannot open for writing: " + output);
    f << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return fit.converged ? kExitOk : kExitNumerical;
}

// ----------------------------------------------------------------- simulate

int simulate_experiment(const Config& cfg, const std::string& output, double scale,
                        std::uint64_t seed, int threads, bool expensive,
                        RunManifest& manifest) {
  ExperimentConfig ec;
  ec.family = parse_family(cfg.get("model", "family"));
  ec.theta0 = cfg.get_doubles("model", "theta0");
  ec.m = cfg.get_int("data", "m");
  ec.n_c = cfg.get_int("data", "n_c");
  ec.T = std::max(1, static_cast<int>(std::lround(cfg.get_int("study", "T") * scale)));
  ec.symbol = symbol_spec_from_config(cfg);
  ec.rect_mode = parse_rect_mode(cfg.get_or("estimator", "likelihood", "full"));
  ec.mc_samples = cfg.get_int_or("estimator", "mc_samples", 100000);
  ec.master_seed = seed;
  ec.threads = threads;
  if (ec.n_c > 100 && !expensive)
    throw std::invalid_argument(
        "n_c > 100 is gated behind --expensive (long runtime)");

  ExperimentSummary summary = run_experiment(ec);

  CsvWriter csv(output);
  csv.header({"study", "likelihood", "family", "m", "n_c", "T", "param", "mean", "sd",
              "failures", "wall_seconds"});
  const std::string lik = cfg.get_or("estimator", "likelihood", "full");
  for (std::size_t p = 0; p < summary.param_names.size(); ++p) {
    csv.row({"experiment", lik, family_id_name(ec.family), std::to_string(ec.m),
             std::to_string(ec.n_c), std::to_string(ec.T), summary.param_names[p],
             csv.format(summary.mean[p]),
             summary.sd ? csv.format((*summary.sd)[p]) : "",
             std::to_string(summary.failures), csv.format(summary.wall_seconds)});
  }
  manifest.notes["replicates_converged"] = std::to_string(summary.replicates);
  manifest.notes["failures"] = std::to_string(summary.failures);
  std::cerr << "simulate: experiment finished in " << summary.wall_seconds << " s, "
            << summary.failures << " failures\n";
  return kExitOk;
}

int simulate_rmse(const Config& cfg, const std::string& output, double scale,
                  std::uint64_t seed, int threads, RunManifest& manifest) {
  RmseConfig rc;
  rc.n = cfg.get_int("model", "n");
  rc.mu0 = cfg.get_double("model", "mu0");
  rc.sigma0 = cfg.get_double("model", "sigma0");
  rc.T = std::max(2, static_cast<int>(std::lround(cfg.get_int("study", "T") * scale)));
  rc.master_seed = seed;
  rc.threads = threads;

  RmseCurve curve = run_rmse_study(rc);

  CsvWriter csv(output);
  csv.header({"n", "T", "i", "q", "kind", "rmse_mu", "rmse_sigma"});
  csv.row({std::to_string(rc.n), std::to_string(rc.T), "0", "", "classical",
           csv.format(curve.classical_rmse_mu), csv.format(curve.classical_rmse_sigma)});
  for (const auto& p : curve.points) {
    csv.row({std::to_string(rc.n), std::to_string(rc.T), std::to_string(p.i),
             csv.format(p.q), "interval", csv.format(p.rmse_mu_interval),
             csv.format(p.rmse_sigma_interval)});
    csv.row({std::to_string(rc.n), std::to_string(rc.T), std::to_string(p.i),
             csv.format(p.q), "histogram", csv.format(p.rmse_mu_hist),
             csv.format(p.rmse_sigma_hist)});
  }
  manifest.notes["points"] = std::to_string(curve.points.size());
  std::cerr << "simulate: rmse study finished in " << curve.wall_seconds << " s\n";
  return kExitOk;
}

int simulate_meta_bias(const Config& cfg, const std::string& output, double scale,
                       std::uint64_t seed, int threads, RunManifest& manifest) {
  MetaBiasConfig mc;
  mc.population = parse_family(cfg.get("model", "population"));
  mc.theta0 = cfg.get_doubles("model", "theta0");
  mc.q_grid = cfg.get_ints("model", "q_grid");
  mc.T = std::max(2, static_cast<int>(std::lround(cfg.get_int("study", "T") * scale)));
  mc.master_seed = seed;
  mc.threads = threads;

  MetaBiasTable table = run_meta_bias_study(mc);

  CsvWriter csv(output);
  csv.header({"population", "T", "n", "method", "stat", "bias", "se"});
  for (const auto& row : table.rows) {
    csv.row({family_id_name(mc.population), std::to_string(mc.T), std::to_string(row.n),
             row.method, row.stat, csv.format(row.bias), csv.format(row.se)});
  }
  manifest.notes["rows"] = std::to_string(table.rows.size());
  std::cerr << "simulate: meta bias study finished in " << table.wall_seconds << " s\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& output,
                 std::optional<std::uint64_t> seed, double scale, int threads,
                 bool expensive) {
  if (!seed)
    throw std::invalid_argument("simulate requires --seed (no silent nondeterminism)");
  Config cfg = Config::load(config_path);
  const std::string study = cfg.get("study", "type");

  RunManifest manifest = begin_manifest("simulate");
  manifest.config_echo = cfg.sections();
  manifest.master_seed = *seed;
  manifest.seeded = true;
  manifest.outputs = {output};

  const auto t0 = std::chrono::steady_clock::now();
  int rc;
  if (study == "experiment")
    rc = simulate_experiment(cfg, output, scale, *seed, threads, expensive, manifest);
  else if (study == "rmse")
    rc = simulate_rmse(cfg, output, scale, *seed, threads, manifest);
  else if (study == "meta_bias")
    rc = simulate_meta_bias(cfg, output, scale, *seed, threads, manifest);
  else
    throw std::invalid_argument("unknown study type '" + study +
                                "' (experiment|rmse|meta_bias)");
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  finish_manifest(manifest, wall, output + ".manifest.json");
  return rc;
}

// --------------------------------------------------------------------- meta

int cmd_meta(const std::string& q_text, int n, const std::string& methods_text) {
  const std::vector<double> qv = parse_theta(q_text);
  if (qv.size() != 5)
    throw std::invalid_argument("--q needs exactly five comma-separated quantiles");
  Quantiles5 q = {qv[0], qv[1], qv[2], qv[3], qv[4]};

  std::vector<std::string> methods;
  std::stringstream ss(methods_text);
  std::string item;
  while (std::getline(ss, item, ',')) methods.push_back(item);

  std::printf("%-20s %14s %14s\n", "method", "mean", "sd");
  for (const auto& m : methods) {
    if (m == "luo") {
      std::printf("%-20s %14.8g %14s\n", "luo", meta_mean_luo(q, n), "-");
    } else if (m == "wan") {
      std::printf("%-20s %14s %14.8g\n", "wan", "-", meta_sd_wan(q, n));
    } else if (m == "shi") {
      std::printf("%-20s %14s %14.8g\n", "shi", "-", meta_sd_shi(q, n));
    } else if (m == "symbolic-normal") {
      auto est = meta_symbolic(q, n, FamilyId::Normal1D);
      std::printf("%-20s %14.8g %14.8g\n", "symbolic-normal", est.mean_hat, est.sd_hat);
    } else if (m == "symbolic-lognormal") {
      auto est = meta_symbolic(q, n, FamilyId::LogNormal1D);
      std::printf("%-20s %14.8g %14.8g\n", "symbolic-lognormal", est.mean_hat,
                  est.sd_hat);
    } else {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------- oracle-check

int cmd_oracle_check(const std::string& which, long n_sims, std::uint64_t seed,
                     const std::string& manifest_path) {
  RunManifest manifest = begin_manifest("oracle-check");
  manifest.master_seed = seed;
  manifest.seeded = true;
  const auto t0 = std::chrono::steady_clock::now();

  const Family normal = Family::normal(0.0, 1.0);
  const Family biv = Family::bivariate_normal(2.0, 5.0, 0.5, 0.5, 0.7);
  bool pass;
  if (which == "segment-convention") {
    auto res = resolve_iter_seg_convention(biv, n_sims, RngStream(seed));
    pass = res.resolved;
    manifest.notes["convention"] =
        res.chosen == UpperIndexConvention::FromBottom
            ? "upper index counted from the bottom of the upper segment"
            : "upper index counted from the top of the upper segment";
    manifest.notes["from_bottom_max_z"] = std::to_string(res.from_bottom.max_abs_z);
    manifest.notes["from_top_max_z"] = std::to_string(res.from_top.max_abs_z);
    std::cout << (pass ? "PASS" : "FAIL") << " segment-convention: "
              << manifest.notes["convention"]
              << " (z_bottom=" << res.from_bottom.max_abs_z
              << ", z_top=" << res.from_top.max_abs_z << ")\n";
  } else {
    OracleSpec spec;
    if (which == "interval") {
      spec.kind = OracleKind::Interval;
      spec.n = 10;
      spec.l = {2};
      spec.u = {9};
    } else if (which == "hist-fixed") {
      spec.kind = OracleKind::HistFixed;
      spec.n = 6;
      spec.grids = {{-2.0, -0.5, 1.0, 3.0}};
    } else if (which == "hist-random") {
      spec.kind = OracleKind::HistRandom;
      spec.n = 21;
      spec.k = {3, 11, 19};
    } else if (which == "rect-minmax") {
      spec.kind = OracleKind::RectMinMax;
      spec.n = 8;
    } else if (which == "rect-nested") {
      spec.kind = OracleKind::SeqNest;
      spec.n = 60;
      spec.l = {6, 5};
      spec.u = {55, 35};
    } else if (which == "rect-segmented") {
      spec.kind = OracleKind::IterSeg;
      spec.n = 60;
      spec.l = {6, 3};
      spec.u = {55, 3};
    } else {
      throw std::invalid_argument(
          "unknown oracle spec '" + which +
          "' (interval|hist-fixed|hist-random|rect-minmax|rect-nested|rect-segmented|segment-convention)");
    }
    const Family& fam = spec.kind == OracleKind::Interval ||
                                spec.kind == OracleKind::HistFixed ||
                                spec.kind == OracleKind::HistRandom
                            ? normal
                            : biv;
    auto report = mc_density_oracle(spec, fam, n_sims, RngStream(seed));
    pass = report.pass(4.0);
    manifest.notes["max_abs_z"] = std::to_string(report.max_abs_z);
    std::cout << (pass ? "PASS" : "FAIL") << " " << which
              << ": max standardized discrepancy " << report.max_abs_z << " over "
              << report.z_scores.size() << " checks (" << n_sims << " simulations)\n";
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!manifest_path.empty()) finish_manifest(manifest, wall, manifest_path);
  return pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic likelihood toolkit"};
  app.require_subcommand(1);

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "build symbols from a micro-data CSV");
  std::string agg_input, agg_config, agg_output;
  agg->add_option("--input", agg_input, "input CSV (numeric columns + optional 'class')")
      ->required();
  agg->add_option("--config", agg_config, "symbol spec config file")->required();
  agg->add_option("--output", agg_output, "output symbols JSON")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "maximum likelihood fit over a symbols file");
  std::string fit_input, fit_family, fit_theta0, fit_output, fit_likelihood = "full";
  int fit_mc_samples = 100000, fit_max_iter = 5000;
  double fit_tol = 1e-9;
  std::uint64_t fit_seed = 1;
  fit->add_option("--input", fit_input, "symbols JSON")->required();
  fit->add_option("--family", fit_family, "model family")->required();
  fit->add_option("--theta0", fit_theta0, "comma-separated starting parameters")
      ->required();
  fit->add_option("--output", fit_output, "FitResult JSON path");
  fit->add_option("--likelihood", fit_likelihood,
                  "rectangle likelihood: full|p4|marginalized");
  fit->add_option("--mc-samples", fit_mc_samples,
                  "configuration-probability samples (marginalized)");
  fit->add_option("--seed", fit_seed, "stream seed for the marginalized likelihood");
  fit->add_option("--max-iter", fit_max_iter, "optimizer iteration cap");
  fit->add_option("--tol", fit_tol, "simplex log-likelihood spread tolerance");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a replicated study from a config file");
  std::string sim_config, sim_output;
  std::optional<std::uint64_t> sim_seed;
  double sim_scale = 1.0;
  int sim_threads = default_thread_count();
  bool sim_expensive = false;
  sim->add_option("--config", sim_config, "study config file")->required();
  sim->add_option("--output", sim_output, "output CSV")->required();
  sim->add_option("--seed", sim_seed, "master seed (required)");
  sim->add_option("--scale", sim_scale, "replicate-count scale factor");
  sim->add_option("--threads", sim_threads, "worker pool cap");
  sim->add_flag("--expensive", sim_expensive, "allow n_c > 100 cells");

  // meta
  auto* meta = app.add_subcommand("meta", "quantile-based mean/sd estimators");
  std::string meta_q, meta_methods = "luo,wan,shi,symbolic-normal";
  int meta_n = 0;
  meta->add_option("--q", meta_q, "five quantiles: min,q1,median,q3,max")->required();
  meta->add_option("--n", meta_n, "underlying sample size")->required();
  meta->add_option("--methods", meta_methods, "comma-separated method list");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check",
                                    "validate a closed-form likelihood by simulation");
  std::string oracle_spec, oracle_manifest = "oracle_manifest.json";
  long oracle_sims = 1000000;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("--spec", oracle_spec, "which check to run")->required();
  oracle->add_option("--sims", oracle_sims, "number of simulated symbols");
  oracle->add_option("--seed", oracle_seed, "stream seed");
  oracle->add_option("--manifest", oracle_manifest, "manifest output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*agg) return cmd_aggregate(agg_input, agg_config, agg_output);
    if (*fit)
      return cmd_fit(fit_input, fit_family, fit_theta0, fit_output, fit_likelihood,
                     fit_mc_samples, fit_seed, fit_max_iter, fit_tol);
    if (*sim)
      return cmd_simulate(sim_config, sim_output, sim_seed, sim_scale, sim_threads,
                          sim_expensive);
    if (*meta) return cmd_meta(meta_q, meta_n, meta_methods);
    if (*oracle)
      return cmd_oracle_check(oracle_spec, oracle_sims, oracle_seed, oracle_manifest);
  } catch (const TieError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
