#include "symlik/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "symlik/special.hpp"

namespace symlik {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<std::string> transform_names(FamilyId id) {
  switch (id) {
    case FamilyId::Normal1D:
    case FamilyId::LogNormal1D: return {"identity", "log"};
    case FamilyId::SkewNormal1D: return {"identity", "log", "identity"};
    case FamilyId::BivariateNormal:
      return {"identity", "identity", "log", "log", "atanh"};
    case FamilyId::Uniform1D: return {"identity", "log-width"};
  }
  return {};
}

std::vector<double> to_unconstrained(FamilyId id, const std::vector<double>& theta) {
  std::vector<double> z = theta;
  switch (id) {
    case FamilyId::Normal1D:
    case FamilyId::LogNormal1D: z[1] = std::log(theta[1]); break;
    case FamilyId::SkewNormal1D: z[1] = std::log(theta[1]); break;
    case FamilyId::BivariateNormal:
      z[2] = std::log(theta[2]);
      z[3] = std::log(theta[3]);
      z[4] = std::atanh(theta[4]);
      break;
    case FamilyId::Uniform1D: z[1] = std::log(theta[1] - theta[0]); break;
  }
  return z;
}

std::vector<double> to_constrained(FamilyId id, const std::vector<double>& z) {
  std::vector<double> theta = z;
  switch (id) {
    case FamilyId::Normal1D:
    case FamilyId::LogNormal1D: theta[1] = std::exp(z[1]); break;
    case FamilyId::SkewNormal1D: theta[1] = std::exp(z[1]); break;
    case FamilyId::BivariateNormal:
      theta[2] = std::exp(z[2]);
      theta[3] = std::exp(z[3]);
      theta[4] = std::tanh(z[4]);
      break;
    case FamilyId::Uniform1D: theta[1] = z[0] + std::exp(z[1]); break;
  }
  return theta;
}

SimplexResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x0, double tol, int max_iter) {
  // Standard coefficients: reflection 1, expansion 2, contraction 1/2,
  // shrink 1/2. The objective is maximized directly.
  const int dim = static_cast<int>(x0.size());
  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> fv(dim + 1);
  for (int j = 0; j < dim; ++j)
    pts[j + 1][j] += std::max(0.1, 0.1 * std::abs(x0[j]));
  for (int i = 0; i <= dim; ++i) fv[i] = f(pts[i]);

  auto order = [&]() {
    std::vector<int> idx(dim + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] > fv[b]; });
    std::vector<std::vector<double>> p2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (int i = 0; i <= dim; ++i) {
      p2[i] = pts[idx[i]];
      f2[i] = fv[idx[i]];
    }
    pts.swap(p2);
    fv.swap(f2);
  };

  int iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    order();
    if (std::isfinite(fv[0]) && std::isfinite(fv[dim]) && fv[0] - fv[dim] < tol) {
      converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) centroid[j] += pts[i][j] / dim;

    auto blend = [&](double coeff) {
      std::vector<double> p(dim);
      for (int j = 0; j < dim; ++j)
        p[j] = centroid[j] + coeff * (pts[dim][j] - centroid[j]);
      return p;
    };

    auto reflect = blend(-1.0);
    const double fr = f(reflect);
    if (fr > fv[0]) {
      auto expand = blend(-2.0);
      const double fe = f(expand);
      if (fe > fr) {
        pts[dim] = std::move(expand);
        fv[dim] = fe;
      } else {
        pts[dim] = std::move(reflect);
        fv[dim] = fr;
      }
      continue;
    }
    if (fr > fv[dim - 1]) {
      pts[dim] = std::move(reflect);
      fv[dim] = fr;
      continue;
    }
    // Contraction, outside if the reflection improved on the worst.
    const bool outside = fr > fv[dim];
    auto contract = blend(outside ? -0.5 : 0.5);
    const double fc = f(contract);
    if ((outside && fc >= fr) || (!outside && fc > fv[dim])) {
      pts[dim] = std::move(contract);
      fv[dim] = fc;
      continue;
    }
    // Shrink toward the best point.
    for (int i = 1; i <= dim; ++i) {
      for (int j = 0; j < dim; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
      fv[i] = f(pts[i]);
    }
  }
  order();
  return {pts[0], fv[0], iter, converged};
}

namespace {

struct Objective {
  FamilyId id;
  std::span<const Symbol> symbols;
  const EvalOptions* eval;
  const std::vector<bool>* fixed;
  const std::vector<double>* z_fixed;  // unconstrained values for fixed slots

  // Expand the free coordinates into the full unconstrained vector.
  std::vector<double> expand(const std::vector<double>& zfree) const {
    if (!fixed || fixed->empty()) return zfree;
    std::vector<double> z(*z_fixed);
    std::size_t k = 0;
    for (std::size_t j = 0; j < z.size(); ++j)
      if (!(*fixed)[j]) z[j] = zfree[k++];
    return z;
  }

  double operator()(const std::vector<double>& zfree) const {
    auto fam = Family::try_make(id, to_constrained(id, expand(zfree)));
    if (!fam) return kNegInf;
    try {
      return dataset_loglik(symbols, *fam, *eval).value;
    } catch (const std::domain_error&) {
      return kNegInf;  // a symbol fell outside this theta's support
    }
  }
};

std::vector<double> shrink_to_free(const std::vector<double>& z,
                                   const std::vector<bool>& fixed) {
  if (fixed.empty()) return z;
  std::vector<double> out;
  for (std::size_t j = 0; j < z.size(); ++j)
    if (!fixed[j]) out.push_back(z[j]);
  return out;
}

// Local-optimum check: a +-step probe in each free coordinate must not
// improve the objective by more than 10*tol.
bool passes_local_check(const Objective& obj, const std::vector<double>& zfree,
                        double fbest, double tol) {
  const double step = std::max(1e-6, std::sqrt(tol));
  for (std::size_t j = 0; j < zfree.size(); ++j) {
    for (double sgn : {-1.0, 1.0}) {
      std::vector<double> probe = zfree;
      probe[j] += sgn * step * std::max(1.0, std::abs(zfree[j]));
      if (obj(probe) > fbest + 10.0 * tol) return false;
    }
  }
  return true;
}

}  // namespace

FitResult fit_mle(std::span<const Symbol> symbols, FamilyId family_id,
                  std::vector<double> theta0, const FitOptions& options) {
  if (symbols.empty()) throw std::invalid_argument("fit_mle: no symbols");
  auto fam0 = Family::try_make(family_id, theta0);
  if (!fam0) throw std::invalid_argument("fit_mle: invalid theta0");
  if (!options.fixed.empty() && options.fixed.size() != theta0.size())
    throw std::invalid_argument("fit_mle: fixed mask length mismatch");

  const std::vector<double> z0_full = to_unconstrained(family_id, theta0);
  Objective obj{family_id, symbols, &options.eval, &options.fixed, &z0_full};

  std::vector<double> z0 = shrink_to_free(z0_full, options.fixed);
  if (z0.empty()) throw std::invalid_argument("fit_mle: all parameters fixed");
  const double f0 = obj(z0);
  if (f0 == kNegInf)
    throw NumericalError(
        "fit_mle: theta0 assigns zero probability to an observed symbol");

  SimplexResult best = nelder_mead_maximize(obj, z0, options.tol, options.max_iter);
  int restarts = 0;
  int total_iter = best.iterations;
  // Jittered restarts when a run stalls short of a local optimum; jitter
  // seeds are fixed so fits are deterministic.
  while (!passes_local_check(obj, best.x, best.fmax, options.tol) &&
         restarts < options.max_restarts) {
    ++restarts;
    RngStream jitter(0x5eedu + static_cast<std::uint64_t>(restarts));
    std::vector<double> start = best.x;
    for (double& zj : start)
      zj += 0.05 * std::max(1.0, std::abs(zj)) * (2.0 * jitter.uniform01() - 1.0);
    SimplexResult run = nelder_mead_maximize(obj, start, options.tol, options.max_iter);
    total_iter += run.iterations;
    if (run.fmax > best.fmax) best = std::move(run);
  }

  FitResult out;
  out.transform_trace = transform_names(family_id);
  out.iterations = total_iter;
  out.converged = best.converged;
  out.loglik_at_max = best.fmax;
  out.theta_hat = to_constrained(family_id, obj.expand(best.x));
  if (restarts > 0) out.diagnostics = "restarts=" + std::to_string(restarts);
  return out;
}

namespace {

// Inverse of a symmetric positive-definite matrix via Cholesky; nullopt
// when the factorization breaks down.
std::optional<std::vector<double>> spd_inverse(std::vector<double> a, int n) {
  std::vector<double> chol(a);
  for (int j = 0; j < n; ++j) {
    double diag = chol[j * n + j];
    for (int k = 0; k < j; ++k) diag -= chol[j * n + k] * chol[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return std::nullopt;
    diag = std::sqrt(diag);
    chol[j * n + j] = diag;
    for (int i = j + 1; i < n; ++i) {
      double v = chol[i * n + j];
      for (int k = 0; k < j; ++k) v -= chol[i * n + k] * chol[j * n + k];
      chol[i * n + j] = v / diag;
    }
  }
  // Solve L L^T X = I column by column.
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> col(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double v = (i == c) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) v -= chol[i * n + k] * col[k];
      col[i] = v / chol[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double v = col[i];
      for (int k = i + 1; k < n; ++k) v -= chol[k * n + i] * inv[k * n + c];
      inv[i * n + c] = v / chol[i * n + i];
    }
  }
  return inv;
}

}  // namespace

std::optional<std::vector<double>> stderr_hessian(const FitResult& fit,
                                                  std::span<const Symbol> symbols,
                                                  FamilyId family_id,
                                                  const EvalOptions& eval) {
  const int n = static_cast<int>(fit.theta_hat.size());
  auto value_at = [&](const std::vector<double>& theta) -> double {
    auto fam = Family::try_make(family_id, theta);
    if (!fam) return kNegInf;
    try {
      return dataset_loglik(symbols, *fam, eval).value;
    } catch (const std::domain_error&) {
      return kNegInf;
    }
  };
  std::vector<double> step(n);
  for (int j = 0; j < n; ++j) step[j] = std::max(1e-4, 1e-4 * std::abs(fit.theta_hat[j]));

  const double f0 = value_at(fit.theta_hat);
  std::vector<double> neg_hess(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double h;
      if (i == j) {
        auto tp = fit.theta_hat, tm = fit.theta_hat;
        tp[i] += step[i];
        tm[i] -= step[i];
        h = (value_at(tp) - 2.0 * f0 + value_at(tm)) / (step[i] * step[i]);
      } else {
        auto tpp = fit.theta_hat, tpm = fit.theta_hat, tmp = fit.theta_hat,
             tmm = fit.theta_hat;
        tpp[i] += step[i]; tpp[j] += step[j];
        tpm[i] += step[i]; tpm[j] -= step[j];
        tmp[i] -= step[i]; tmp[j] += step[j];
        tmm[i] -= step[i]; tmm[j] -= step[j];
        h = (value_at(tpp) - value_at(tpm) - value_at(tmp) + value_at(tmm)) /
            (4.0 * step[i] * step[j]);
      }
      if (!std::isfinite(h)) return std::nullopt;
      neg_hess[i * n + j] = neg_hess[j * n + i] = -h;
    }
  }
  auto inv = spd_inverse(std::move(neg_hess), n);
  if (!inv) return std::nullopt;
  std::vector<double> se(n);
  for (int j = 0; j < n; ++j) {
    const double v = (*inv)[j * n + j];
    if (!(v >= 0.0)) return std::nullopt;
    se[j] = std::sqrt(v);
  }
  return se;
}

}  // namespace symlik
