#include "symlik/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "symlik/special.hpp"

namespace symlik {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxAbsDelta = 0.9952;  // skewness admissibility guard

bool params_valid(FamilyId id, const std::vector<double>& t) {
  auto finite = [](double v) { return std::isfinite(v); };
  switch (id) {
    case FamilyId::Normal1D:
    case FamilyId::LogNormal1D:
      return t.size() == 2 && finite(t[0]) && finite(t[1]) && t[1] > 0.0;
    case FamilyId::SkewNormal1D: {
      if (t.size() != 3 || !finite(t[0]) || !finite(t[1]) || !finite(t[2])) return false;
      if (t[1] <= 0.0) return false;
      const double b = std::sqrt(2.0 / kPi);
      const double c = std::cbrt(2.0 * t[2] / (4.0 - kPi));
      const double delta = c / (b * std::sqrt(1.0 + c * c));
      return std::abs(delta) <= kMaxAbsDelta;
    }
    case FamilyId::BivariateNormal:
      return t.size() == 5 && finite(t[0]) && finite(t[1]) && finite(t[2]) &&
             finite(t[3]) && finite(t[4]) && t[2] > 0.0 && t[3] > 0.0 &&
             t[4] > -1.0 && t[4] < 1.0;
    case FamilyId::Uniform1D:
      return t.size() == 2 && finite(t[0]) && finite(t[1]) && t[0] < t[1];
  }
  return false;
}

}  // namespace

std::string family_id_name(FamilyId id) {
  switch (id) {
    case FamilyId::Normal1D: return "normal";
    case FamilyId::LogNormal1D: return "lognormal";
    case FamilyId::SkewNormal1D: return "skewnormal";
    case FamilyId::BivariateNormal: return "bivnormal";
    case FamilyId::Uniform1D: return "uniform";
  }
  return "?";
}

std::optional<FamilyId> family_id_from_name(const std::string& name) {
  if (name == "normal") return FamilyId::Normal1D;
  if (name == "lognormal") return FamilyId::LogNormal1D;
  if (name == "skewnormal") return FamilyId::SkewNormal1D;
  if (name == "bivnormal") return FamilyId::BivariateNormal;
  if (name == "uniform") return FamilyId::Uniform1D;
  return std::nullopt;
}

Family::Family(FamilyId id, std::vector<double> theta) : id_(id), theta_(std::move(theta)) {
  validate();
  precompute();
}

Family Family::normal(double mu, double sigma) { return Family(FamilyId::Normal1D, {mu, sigma}); }
Family Family::log_normal(double mu, double sigma) {
  return Family(FamilyId::LogNormal1D, {mu, sigma});
}
Family Family::skew_normal(double mean, double variance, double skewness) {
  return Family(FamilyId::SkewNormal1D, {mean, variance, skewness});
}
Family Family::bivariate_normal(double mu1, double mu2, double sigma1, double sigma2,
                                double rho) {
  return Family(FamilyId::BivariateNormal, {mu1, mu2, sigma1, sigma2, rho});
}
Family Family::uniform(double lower, double upper) {
  return Family(FamilyId::Uniform1D, {lower, upper});
}

std::optional<Family> Family::try_make(FamilyId id, std::vector<double> theta) {
  if (!params_valid(id, theta)) return std::nullopt;
  return Family(id, std::move(theta));
}

void Family::validate() const {
  if (!params_valid(id_, theta_))
    throw std::invalid_argument("Family: invalid parameters for " + family_id_name(id_));
}

void Family::precompute() {
  if (id_ != FamilyId::SkewNormal1D) return;
  // Centred (mean, variance, skewness) -> direct (xi, omega, alpha).
  const double mean = theta_[0], variance = theta_[1], skew = theta_[2];
  const double b = std::sqrt(2.0 / kPi);
  const double c = std::cbrt(2.0 * skew / (4.0 - kPi));
  sn_delta_ = c / (b * std::sqrt(1.0 + c * c));
  sn_alpha_ = sn_delta_ / std::sqrt(1.0 - sn_delta_ * sn_delta_);
  sn_omega_ = std::sqrt(variance / (1.0 - b * b * sn_delta_ * sn_delta_));
  sn_xi_ = mean - sn_omega_ * b * sn_delta_;
}

std::vector<std::string> Family::param_names() const {
  switch (id_) {
    case FamilyId::Normal1D:
    case FamilyId::LogNormal1D: return {"mu", "sigma"};
    case FamilyId::SkewNormal1D: return {"mean", "variance", "skewness"};
    case FamilyId::BivariateNormal: return {"mu1", "mu2", "sigma1", "sigma2", "rho"};
    case FamilyId::Uniform1D: return {"lower", "upper"};
  }
  return {};
}

double Family::log_pdf(double x) const {
  switch (id_) {
    case FamilyId::Normal1D: {
      const double z = (x - theta_[0]) / theta_[1];
      return norm_log_pdf(z) - std::log(theta_[1]);
    }
    case FamilyId::LogNormal1D: {
      if (x <= 0.0) throw std::domain_error("lognormal pdf: x must be > 0");
      const double z = (std::log(x) - theta_[0]) / theta_[1];
      return norm_log_pdf(z) - std::log(theta_[1]) - std::log(x);
    }
    case FamilyId::SkewNormal1D: {
      const double z = (x - sn_xi_) / sn_omega_;
      return std::log(2.0) - std::log(sn_omega_) + norm_log_pdf(z) +
             norm_log_cdf(sn_alpha_ * z);
    }
    case FamilyId::Uniform1D: {
      if (x < theta_[0] || x > theta_[1])
        throw std::domain_error("uniform pdf: x outside support");
      return -std::log(theta_[1] - theta_[0]);
    }
    case FamilyId::BivariateNormal:
      throw std::logic_error("log_pdf(double): family is bivariate");
  }
  return 0.0;
}

double Family::pdf(double x) const { return std::exp(log_pdf(x)); }

double Family::cdf(double x) const {
  switch (id_) {
    case FamilyId::Normal1D:
      if (x == kInf) return 1.0;
      if (x == -kInf) return 0.0;
      return norm_cdf((x - theta_[0]) / theta_[1]);
    case FamilyId::LogNormal1D:
      if (x == kInf) return 1.0;
      if (x <= 0.0) return 0.0;
      return norm_cdf((std::log(x) - theta_[0]) / theta_[1]);
    case FamilyId::SkewNormal1D: {
      if (x == kInf) return 1.0;
      if (x == -kInf) return 0.0;
      const double z = (x - sn_xi_) / sn_omega_;
      return std::clamp(norm_cdf(z) - 2.0 * owens_t(z, sn_alpha_), 0.0, 1.0);
    }
    case FamilyId::Uniform1D:
      if (x <= theta_[0]) return 0.0;
      if (x >= theta_[1]) return 1.0;
      return (x - theta_[0]) / (theta_[1] - theta_[0]);
    case FamilyId::BivariateNormal:
      throw std::logic_error("cdf(double): family is bivariate");
  }
  return 0.0;
}

double Family::rect_prob(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("rect_prob: lower > upper");
  return std::max(0.0, cdf(hi) - cdf(lo));
}

double Family::log_pdf(double x, double y) const {
  if (id_ != FamilyId::BivariateNormal)
    throw std::logic_error("log_pdf(double,double): family is univariate");
  const double z1 = (x - theta_[0]) / theta_[2];
  const double z2 = (y - theta_[1]) / theta_[3];
  const double rho = theta_[4];
  const double om = 1.0 - rho * rho;
  const double q = (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / om;
  return -0.5 * q - std::log(2.0 * kPi * theta_[2] * theta_[3] * std::sqrt(om));
}

double Family::pdf(double x, double y) const { return std::exp(log_pdf(x, y)); }

double Family::cdf(double x, double y) const {
  if (id_ != FamilyId::BivariateNormal)
    throw std::logic_error("cdf(double,double): family is univariate");
  const double z1 = (x == kInf || x == -kInf) ? x : (x - theta_[0]) / theta_[2];
  const double z2 = (y == kInf || y == -kInf) ? y : (y - theta_[1]) / theta_[3];
  return bvn_cdf(z1, z2, theta_[4]);
}

double Family::rect_prob(double lo1, double lo2, double hi1, double hi2) const {
  if (lo1 > hi1 || lo2 > hi2) throw std::invalid_argument("rect_prob: lower > upper");
  const double p = cdf(hi1, hi2) - cdf(lo1, hi2) - cdf(hi1, lo2) + cdf(lo1, lo2);
  return std::clamp(p, 0.0, 1.0);
}

double Family::conditional_cdf(int target_index, double value_at_other, double x) const {
  if (id_ != FamilyId::BivariateNormal)
    throw std::logic_error("conditional_cdf: family is not bivariate");
  if (target_index != 1 && target_index != 2)
    throw std::invalid_argument("conditional_cdf: target_index must be 1 or 2");
  // Condition on coordinate target_index taking value_at_other; return
  // the conditional CDF of the remaining coordinate at x.
  const int i = target_index - 1;      // conditioned coordinate
  const int j = 1 - i;                 // remaining coordinate
  const double mu_i = theta_[i], mu_j = theta_[j];
  const double s_i = theta_[2 + i], s_j = theta_[2 + j];
  const double rho = theta_[4];
  const double mean = mu_j + rho * (s_j / s_i) * (value_at_other - mu_i);
  const double sd = s_j * std::sqrt(1.0 - rho * rho);
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return norm_cdf((x - mean) / sd);
}

double Family::marginal_pdf(int index, double x) const {
  return margin(index).pdf(x);
}

double Family::marginal_log_pdf(int index, double x) const {
  return margin(index).log_pdf(x);
}

double Family::marginal_cdf(int index, double x) const { return margin(index).cdf(x); }

Family Family::margin(int index) const {
  if (id_ != FamilyId::BivariateNormal)
    throw std::logic_error("margin: family is not bivariate");
  if (index != 1 && index != 2) throw std::invalid_argument("margin: index must be 1 or 2");
  return Family::normal(theta_[index - 1], theta_[1 + index]);
}

double Family::rect_prob(std::span<const double> lower, std::span<const double> upper) const {
  if (lower.size() != upper.size() || lower.size() != static_cast<std::size_t>(dim()))
    throw std::invalid_argument("rect_prob: dimension mismatch");
  if (dim() == 1) return rect_prob(lower[0], upper[0]);
  return rect_prob(lower[0], lower[1], upper[0], upper[1]);
}

DataMatrix Family::sample(int n, RngStream& rng) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  DataMatrix out(n, dim());
  switch (id_) {
    case FamilyId::Normal1D:
      for (int i = 0; i < n; ++i) out(i, 0) = theta_[0] + theta_[1] * rng.normal();
      break;
    case FamilyId::LogNormal1D:
      for (int i = 0; i < n; ++i)
        out(i, 0) = std::exp(theta_[0] + theta_[1] * rng.normal());
      break;
    case FamilyId::SkewNormal1D: {
      const double c = std::sqrt(1.0 - sn_delta_ * sn_delta_);
      for (int i = 0; i < n; ++i) {
        const double z0 = rng.normal(), z1 = rng.normal();
        out(i, 0) = sn_xi_ + sn_omega_ * (sn_delta_ * std::abs(z0) + c * z1);
      }
      break;
    }
    case FamilyId::BivariateNormal: {
      const double rho = theta_[4];
      const double c = std::sqrt(1.0 - rho * rho);
      for (int i = 0; i < n; ++i) {
        const double z1 = rng.normal(), z2 = rng.normal();
        out(i, 0) = theta_[0] + theta_[2] * z1;
        out(i, 1) = theta_[1] + theta_[3] * (rho * z1 + c * z2);
      }
      break;
    }
    case FamilyId::Uniform1D:
      for (int i = 0; i < n; ++i) out(i, 0) = rng.uniform(theta_[0], theta_[1]);
      break;
  }
  return out;
}

}  // namespace symlik
