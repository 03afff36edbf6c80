#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "symlik/family.hpp"
#include "symlik/symbols.hpp"

namespace symlik {

// Log-likelihood value on the natural-log scale. Values are finite or
// -inf (zero-probability configurations), never NaN. All combinatorial
// constants (factorials, multinomial coefficients, falling factorials)
// are included, computed via log-gamma, so reductions between symbol
// types hold exactly.
struct LogLik {
  double value = 0.0;
  bool includes_combinatorial_constant = true;
};

// Joint density of two order statistics (x_(l), x_(u), n).
LogLik loglik_interval(const IntervalSymbol& sym, const Family& family);

// Bounding-box likelihood with full construction information (p and the
// defining locations); d = 2, p in {2, 3, 4}.
LogLik loglik_rect_full(const RectMinMaxSymbol& sym, const Family& family);

// Bounding-box likelihood with p forced to 2d and locations ignored.
LogLik loglik_rect_2d(const RectMinMaxSymbol& sym, const Family& family);

// Probabilities of the seven d=2 construction configurations:
//   0: p=2 diagonal corners, 1: p=2 anti-diagonal corners,
//   2..5: p=3 corner at BL, TL, TR, BR, 6: p=4.
struct RectConfigProbs {
  std::array<double, 7> probs{};
  int n = 0;
};

// Monte Carlo estimate of the configuration probabilities for bounding
// boxes of n points under the family; deterministic given the stream.
RectConfigProbs estimate_rect_config_probs(const Family& family, int n, int mc_samples,
                                           RngStream rng);

// Bounding-box likelihood with construction information marginalized out:
// mixture of loglik_rect_full over configurations, weighted by their
// probabilities under the family.
LogLik loglik_rect_marginalized(const RectMinMaxSymbol& sym, const Family& family,
                                const RectConfigProbs& config);
LogLik loglik_rect_marginalized(const RectMinMaxSymbol& sym, const Family& family,
                                int mc_samples, RngStream rng);

// Order-statistic rectangle built by nesting the second margin inside the
// first margin's interval.
LogLik loglik_rect_seq_nest(const OrderRectSymbol& sym, const Family& family);

// Order-statistic rectangle built from the segments below/above the first
// margin's bounds.
LogLik loglik_rect_iter_seg(const OrderRectSymbol& sym, const Family& family);

// Product of independent per-margin interval likelihoods.
LogLik loglik_rect_marginal_orders(const OrderRectSymbol& sym,
                                   std::span<const Family> margins);

// Multinomial likelihood over a fixed grid; bin probabilities renormalized
// over the grid hull.
LogLik loglik_hist_fixed(const FixedBinHistogramSymbol& sym, const Family& family);

// Joint density of B order statistics with fixed between-counts.
LogLik loglik_hist_random(const RandomBinHistogramSymbol& sym, const Family& family);

// Classical i.i.d. log-likelihood of micro-data (compensated summation).
LogLik classical_loglik(const DataMatrix& X, const Family& family);

enum class RectMode { Full, ForceP4, Marginalized };

struct EvalOptions {
  RectMode rect_mode = RectMode::Full;
  int mc_samples = 100000;     // configuration-probability samples for Marginalized
  std::uint64_t mc_seed = 1;   // stream seed for Marginalized
};

// Sum of per-symbol log-likelihoods; symbols must share one type.
LogLik dataset_loglik(std::span<const Symbol> symbols, const Family& family,
                      const EvalOptions& opts = {});

// log(base^k) with the conventions: k == 0 contributes exactly 0 for any
// base, base <= 0 with k > 0 gives -inf.
double pow_log_term(double base, double k);

double log_factorial(double n);

}  // namespace symlik
