#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symlik/likelihood.hpp"

namespace symlik {

enum class OracleKind { Interval, RectMinMax, SeqNest, IterSeg, HistFixed, HistRandom };

struct OracleSpec {
  OracleKind kind = OracleKind::Interval;
  int n = 10;
  std::vector<int> l, u;                   // interval / rectangle orders
  std::vector<int> k;                      // random-bin histogram orders
  std::vector<std::vector<double>> grids;  // fixed-bin histogram edges
  std::vector<int> axis_order = {1, 2};
  UpperIndexConvention convention = UpperIndexConvention::FromBottom;
};

struct OracleOptions {
  int probes = 20;
  // Test hook: replaces the closed-form evaluator (e.g. to inject an
  // off-by-one exponent as a negative control).
  std::function<double(const Symbol&, const Family&)> loglik_override;
};

struct OracleReport {
  double max_abs_z = 0.0;      // max standardized discrepancy
  std::vector<double> z_scores;
  long n_sims = 0;
  std::string detail;
  bool pass(double threshold = 4.0) const { return max_abs_z < threshold; }
};

// Simulates n_sims symbols under the family and compares the closed-form
// likelihood against the simulation: exact multinomial frequencies for
// the discrete parts (fixed-bin counts, construction configurations) and
// kernel-density estimates at probe points for the continuous parts. The
// KDE is compared against the kernel-smoothed closed form (tensor
// Gauss-Hermite), so the reported discrepancies are purely statistical.
OracleReport mc_density_oracle(const OracleSpec& spec, const Family& family,
                               long n_sims, RngStream rng,
                               const OracleOptions& options = {});

// Runs the iterative-segmentation oracle under both upper-index
// conventions and returns the one whose construction matches the
// implemented likelihood's exponent bookkeeping; exactly one must pass.
struct ConventionResolution {
  UpperIndexConvention chosen = UpperIndexConvention::FromBottom;
  OracleReport from_bottom, from_top;
  bool resolved = false;  // exactly one convention passed
};
ConventionResolution resolve_iter_seg_convention(const Family& family, long n_sims,
                                                 RngStream rng);

}  // namespace symlik
