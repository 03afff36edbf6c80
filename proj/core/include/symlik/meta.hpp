#pragma once

#include <array>
#include <string>

#include "symlik/family.hpp"
#include "symlik/fit.hpp"

namespace symlik {

// Five-number summary q = (min, q1, median, q3, max).
using Quantiles5 = std::array<double, 5>;

enum class MetaMethod { Luo, Wan, Shi, SymbolicNormal, SymbolicLogNormal };

std::string meta_method_name(MetaMethod m);

struct MetaEstimates {
  double mean_hat = 0.0;
  double sd_hat = 0.0;
  MetaMethod method = MetaMethod::Luo;
};

// Weighted three-average estimate of the sample mean from quantiles,
// weights w1 = 2.2/(2.2 + n^0.75), w2 = 0.7 - 0.72/n^0.55.
double meta_mean_luo(const Quantiles5& q, int n);

// Range/IQR combinations with normal-order-statistic scalings.
double meta_sd_wan(const Quantiles5& q, int n);
double meta_sd_shi(const Quantiles5& q, int n);

// Tight tolerances: the n=5 case must reproduce sample statistics to
// 1e-6 relative.
FitOptions meta_fit_options();

// Symbolic estimator: a 4-bin equal-count random histogram (n = 4Q+1,
// k = (1, Q+1, 2Q+1, 3Q+1, n)) fit by maximum likelihood under the base
// family, with the sd rescaled by sqrt(n/(n-1)). For the lognormal base
// the fitted log-scale parameters are mapped to the population mean/sd.
MetaEstimates meta_symbolic(const Quantiles5& q, int n, FamilyId base_family,
                            const FitOptions& options = meta_fit_options());

}  // namespace symlik
