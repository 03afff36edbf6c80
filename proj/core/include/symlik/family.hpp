#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symlik/data_matrix.hpp"
#include "symlik/rng.hpp"

namespace symlik {

enum class FamilyId { Normal1D, LogNormal1D, SkewNormal1D, BivariateNormal, Uniform1D };

std::string family_id_name(FamilyId id);
std::optional<FamilyId> family_id_from_name(const std::string& name);

// Parametric micro-data model exposing the density/distribution
// primitives every symbolic likelihood consumes.
//
// Parameter vectors:
//   Normal1D        (mu, sigma), sigma > 0
//   LogNormal1D     (mu, sigma) on the log scale, support (0, inf)
//   SkewNormal1D    (mean, variance, skewness); centred parameterisation,
//                   valid only while the implied |delta| <= 0.9952
//   BivariateNormal (mu1, mu2, sigma1, sigma2, rho), rho in (-1, 1)
//   Uniform1D       (lower, upper), lower < upper
class Family {
 public:
  Family(FamilyId id, std::vector<double> theta);

  static Family normal(double mu, double sigma);
  static Family log_normal(double mu, double sigma);
  static Family skew_normal(double mean, double variance, double skewness);
  static Family bivariate_normal(double mu1, double mu2, double sigma1, double sigma2,
                                 double rho);
  static Family uniform(double lower, double upper);

  // Validates without throwing; nullopt when theta violates the
  // invariants. Used by the optimizer while exploring parameter space.
  static std::optional<Family> try_make(FamilyId id, std::vector<double> theta);

  FamilyId id() const { return id_; }
  int dim() const { return id_ == FamilyId::BivariateNormal ? 2 : 1; }
  int n_params() const { return static_cast<int>(theta_.size()); }
  const std::vector<double>& theta() const { return theta_; }
  std::vector<std::string> param_names() const;

  // Univariate interface (throws std::logic_error on a bivariate family).
  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;                  // accepts +-inf
  double rect_prob(double lo, double hi) const;

  // Bivariate interface.
  double pdf(double x, double y) const;
  double log_pdf(double x, double y) const;
  double cdf(double x, double y) const;        // joint CDF, accepts +-inf
  double rect_prob(double lo1, double lo2, double hi1, double hi2) const;
  // G_{X_{-i} | X_i = value}(x): conditional CDF of the other coordinate.
  // target_index is the 1-based coordinate being conditioned ON.
  double conditional_cdf(int target_index, double value_at_other, double x) const;
  double marginal_pdf(int index, double x) const;
  double marginal_log_pdf(int index, double x) const;
  double marginal_cdf(int index, double x) const;
  Family margin(int index) const;  // univariate margin of a bivariate family

  // General-d rectangle probability (d = 1 or 2).
  double rect_prob(std::span<const double> lower, std::span<const double> upper) const;

  // n i.i.d. draws; deterministic given the stream.
  DataMatrix sample(int n, RngStream& rng) const;

 private:
  void validate() const;
  void precompute();

  FamilyId id_;
  std::vector<double> theta_;
  // Skew-normal direct parameters induced by the centred ones.
  double sn_xi_ = 0, sn_omega_ = 1, sn_alpha_ = 0, sn_delta_ = 0;
};

}  // namespace symlik
