#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symlik/likelihood.hpp"

namespace symlik {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  int max_iter = 5000;
  double tol = 1e-9;          // simplex log-likelihood spread
  EvalOptions eval;           // rectangle mode / MC settings
  std::vector<bool> fixed;    // parameters held at theta0 (empty = none)
  int max_restarts = 3;       // jittered restarts after a failed optimum check
};

struct FitResult {
  std::vector<double> theta_hat;
  double loglik_at_max = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<std::vector<double>> stderr_;  // from the numerical Hessian
  std::vector<std::string> transform_trace;    // unconstrained map per parameter
  std::string diagnostics;
};

// Maximum likelihood over a homogeneous symbol list by Nelder-Mead in an
// unconstrained parameterisation (log scales, atanh rho, identity on
// means and skewness). Throws NumericalError when theta0 assigns zero
// probability to an observed symbol; non-convergence is flagged, not
// thrown.
FitResult fit_mle(std::span<const Symbol> symbols, FamilyId family_id,
                  std::vector<double> theta0, const FitOptions& options = {});

// Central finite-difference Hessian of the dataset log-likelihood in
// constrained space at fit.theta_hat; returns the standard errors, or
// nullopt when the negative Hessian is not positive definite.
std::optional<std::vector<double>> stderr_hessian(const FitResult& fit,
                                                  std::span<const Symbol> symbols,
                                                  FamilyId family_id,
                                                  const EvalOptions& eval = {});

// Generic Nelder-Mead maximizer used by fit_mle; exposed for direct use.
// f maps an unconstrained point to a value to MAXIMIZE (may return -inf).
struct SimplexResult {
  std::vector<double> x;
  double fmax;
  int iterations;
  bool converged;
};
SimplexResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x0, double tol, int max_iter);

// Unconstrained <-> constrained maps for a family's parameter vector.
std::vector<double> to_unconstrained(FamilyId id, const std::vector<double>& theta);
std::vector<double> to_constrained(FamilyId id, const std::vector<double>& z);
std::vector<std::string> transform_names(FamilyId id);

}  // namespace symlik
