#include "symlik/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "symlik/special.hpp"

namespace symlik {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

double log_factorial(double n) { return std::lgamma(n + 1.0); }

double pow_log_term(double base, double k) {
  if (k == 0.0) return 0.0;
  if (base <= 0.0) return kNegInf;
  return k * std::log(base);
}

LogLik loglik_interval(const IntervalSymbol& sym, const Family& family) {
  if (family.dim() != 1) throw std::invalid_argument("loglik_interval: family must be univariate");
  if (sym.l < 1 || sym.u > sym.n || sym.l >= sym.u || sym.s_l > sym.s_u)
    throw std::invalid_argument("loglik_interval: invalid symbol");
  const double gl = family.cdf(sym.s_l);
  const double gu = family.cdf(sym.s_u);
  double v = log_factorial(sym.n) - log_factorial(sym.l - 1) -
             log_factorial(sym.u - sym.l - 1) - log_factorial(sym.n - sym.u);
  v += pow_log_term(gl, sym.l - 1);
  v += pow_log_term(gu - gl, sym.u - sym.l - 1);
  v += pow_log_term(1.0 - gu, sym.n - sym.u);
  v += family.log_pdf(sym.s_l) + family.log_pdf(sym.s_u);
  return {std::isnan(v) ? kNegInf : v, true};
}

namespace {

// log of the p-specific construction factor for a d=2 bounding box:
// p=2: the two corner densities; p=3: corner density times the two
// edge-conditional terms; p=4: the four edge-conditional terms.
double log_construction_factor(const Family& fam, const std::vector<double>& s_min,
                 const std::vector<double>& s_max, int p,
                 const std::vector<std::array<double, 2>>& locations) {
  const double min1 = s_min[0], min2 = s_min[1], max1 = s_max[0], max2 = s_max[1];
  auto edge_term = [&](int cond_index, double cond_value) {
    // Point on an edge: the conditioned coordinate is pinned at an
    // extreme, the other ranges over its interval.
    const double lo = cond_index == 1 ? min2 : min1;
    const double hi = cond_index == 1 ? max2 : max1;
    const double dG = fam.conditional_cdf(cond_index, cond_value, hi) -
                      fam.conditional_cdf(cond_index, cond_value, lo);
    return pow_log_term(dG, 1.0) + fam.marginal_log_pdf(cond_index, cond_value);
  };
  switch (p) {
    case 2: {
      if (locations.size() != 2)
        throw std::invalid_argument("rect likelihood: p=2 needs two locations");
      return fam.log_pdf(locations[0][0], locations[0][1]) +
             fam.log_pdf(locations[1][0], locations[1][1]);
    }
    case 3: {
      if (locations.size() != 1)
        throw std::invalid_argument("rect likelihood: p=3 needs one corner location");
      const double cx = locations[0][0], cy = locations[0][1];
      // Complement corner holds the two single-extreme points.
      const double ox = (cx == min1) ? max1 : min1;
      const double oy = (cy == min2) ? max2 : min2;
      return fam.log_pdf(cx, cy) + edge_term(1, ox) + edge_term(2, oy);
    }
    case 4:
      return edge_term(2, min2) + edge_term(2, max2) + edge_term(1, min1) +
             edge_term(1, max1);
    default:
      throw std::invalid_argument("rect likelihood: unsupported p");
  }
}

double rect_full_value(const Family& fam, const std::vector<double>& s_min,
                       const std::vector<double>& s_max, int n, int p,
                       const std::vector<std::array<double, 2>>& locations) {
  const double interior = fam.rect_prob(s_min[0], s_min[1], s_max[0], s_max[1]);
  double v = log_factorial(n) - log_factorial(n - p);
  v += pow_log_term(interior, n - p);
  v += log_construction_factor(fam, s_min, s_max, p, locations);
  return std::isnan(v) ? kNegInf : v;
}

void check_rect_symbol(const RectMinMaxSymbol& sym, const Family& fam) {
  if (fam.dim() != 2 || sym.d() != 2)
    throw std::invalid_argument("rect likelihood: requires d = 2");
  if (sym.p < 2 || sym.p > 4) throw std::invalid_argument("rect likelihood: p must be in {2,3,4}");
  if (sym.n < sym.p) throw std::invalid_argument("rect likelihood: n < p");
  if (sym.s_min[0] > sym.s_max[0] || sym.s_min[1] > sym.s_max[1])
    throw std::invalid_argument("rect likelihood: s_min > s_max");
}

// The seven d=2 construction configurations.
std::vector<std::array<double, 2>> config_locations(int config,
                                                    const std::vector<double>& s_min,
                                                    const std::vector<double>& s_max) {
  const double min1 = s_min[0], min2 = s_min[1], max1 = s_max[0], max2 = s_max[1];
  switch (config) {
    case 0: return {{min1, min2}, {max1, max2}};  // p=2 diagonal
    case 1: return {{min1, max2}, {max1, min2}};  // p=2 anti-diagonal
    case 2: return {{min1, min2}};                // p=3 bottom-left corner
    case 3: return {{min1, max2}};                // p=3 top-left
    case 4: return {{max1, max2}};                // p=3 top-right
    case 5: return {{max1, min2}};                // p=3 bottom-right
    default: return {};                           // p=4
  }
}

int config_p(int config) { return config <= 1 ? 2 : (config <= 5 ? 3 : 4); }

int classify_config(const RectMinMaxSymbol& sym) {
  const double min1 = sym.s_min[0], min2 = sym.s_min[1];
  const double max1 = sym.s_max[0], max2 = sym.s_max[1];
  if (sym.p == 4) return 6;
  if (sym.p == 2) {
    const auto& a = sym.locations[0];
    const bool diagonal = (a[0] == min1 && a[1] == min2) || (a[0] == max1 && a[1] == max2);
    return diagonal ? 0 : 1;
  }
  const auto& c = sym.locations[0];
  if (c[0] == min1) return c[1] == min2 ? 2 : 3;
  return c[1] == max2 ? 4 : 5;
}

}  // namespace

LogLik loglik_rect_full(const RectMinMaxSymbol& sym, const Family& family) {
  check_rect_symbol(sym, family);
  return {rect_full_value(family, sym.s_min, sym.s_max, sym.n, sym.p, sym.locations),
          true};
}

LogLik loglik_rect_2d(const RectMinMaxSymbol& sym, const Family& family) {
  RectMinMaxSymbol forced = sym;
  forced.p = 4;
  forced.locations.clear();
  return loglik_rect_full(forced, family);
}

RectConfigProbs estimate_rect_config_probs(const Family& family, int n, int mc_samples,
                                           RngStream rng) {
  if (family.id() != FamilyId::BivariateNormal)
    throw std::invalid_argument("estimate_rect_config_probs: bivariate family required");
  if (mc_samples < 1000)
    throw std::invalid_argument("estimate_rect_config_probs: mc_samples below minimum (1000)");
  RectConfigProbs out;
  out.n = n;
  std::array<long, 7> hits{};
  for (int s = 0; s < mc_samples; ++s) {
    DataMatrix X = family.sample(n, rng);
    ++hits[classify_config(make_rect_minmax(X))];
  }
  for (int c = 0; c < 7; ++c)
    out.probs[c] = static_cast<double>(hits[c]) / mc_samples;
  return out;
}

LogLik loglik_rect_marginalized(const RectMinMaxSymbol& sym, const Family& family,
                                const RectConfigProbs& config) {
  check_rect_symbol(sym, family);
  if (config.n != sym.n)
    throw std::invalid_argument("loglik_rect_marginalized: configuration table for wrong n");
  // log-sum-exp over the seven configurations.
  std::array<double, 7> terms;
  double hi = kNegInf;
  for (int c = 0; c < 7; ++c) {
    const double w = config.probs[c];
    if (w <= 0.0) {
      terms[c] = kNegInf;
      continue;
    }
    const double lv = rect_full_value(family, sym.s_min, sym.s_max, sym.n, config_p(c),
                                      config_locations(c, sym.s_min, sym.s_max));
    terms[c] = lv + std::log(w);
    hi = std::max(hi, terms[c]);
  }
  if (hi == kNegInf) return {kNegInf, true};
  double acc = 0.0;
  for (double t : terms)
    if (t != kNegInf) acc += std::exp(t - hi);
  return {hi + std::log(acc), true};
}

LogLik loglik_rect_marginalized(const RectMinMaxSymbol& sym, const Family& family,
                                int mc_samples, RngStream rng) {
  return loglik_rect_marginalized(
      sym, family, estimate_rect_config_probs(family, sym.n, mc_samples, rng));
}

namespace {

void check_order_rect(const OrderRectSymbol& sym, RectConstruction want) {
  if (sym.construction != want)
    throw std::invalid_argument("order-rect likelihood: wrong construction");
  if (sym.d() != 2) throw std::invalid_argument("order-rect likelihood: d must be 2");
  if (sym.l.size() != 2 || sym.u.size() != 2 || sym.axis_order.size() != 2)
    throw std::invalid_argument("order-rect likelihood: malformed symbol");
}

// Margins of the family in symbol axis order: margins.first corresponds
// to the first constructed margin.
struct AxisView {
  int a1, a2;  // 1-based family coordinate per symbol margin
};

AxisView axis_view(const OrderRectSymbol& sym) { return {sym.axis_order[0], sym.axis_order[1]}; }

}  // namespace

LogLik loglik_rect_seq_nest(const OrderRectSymbol& sym, const Family& family) {
  check_order_rect(sym, RectConstruction::SeqNest);
  if (family.dim() != 2)
    throw std::invalid_argument("loglik_rect_seq_nest: bivariate family required");
  const int n = sym.n, l1 = sym.l[0], u1 = sym.u[0], l2 = sym.l[1], u2 = sym.u[1];
  if (!(1 <= l1 && l1 < u1 && u1 <= n && 1 <= l2 && l2 < u2 && 2 <= u2 &&
        u2 <= u1 - l1 - 1))
    throw std::invalid_argument("loglik_rect_seq_nest: order constraints violated");
  if (sym.s_l[0] > sym.s_u[0] || sym.s_l[1] > sym.s_u[1]) return {kNegInf, true};

  const auto [a1, a2] = axis_view(sym);
  const double sl1 = sym.s_l[0], su1 = sym.s_u[0], sl2 = sym.s_l[1], su2 = sym.s_u[1];
  auto joint_cdf = [&](double v1, double v2) {
    // Joint CDF with arguments given in symbol axis order.
    return a1 == 1 ? family.cdf(v1, v2) : family.cdf(v2, v1);
  };
  const double G1_l = family.marginal_cdf(a1, sl1);
  const double G1_u = family.marginal_cdf(a1, su1);

  double v = log_factorial(n) - log_factorial(l1 - 1) - log_factorial(n - u1) -
             log_factorial(l2 - 1) - log_factorial(u2 - l2 - 1) -
             log_factorial(u1 - l1 - u2 - 1);
  // Margin-1 bound points and outer regions.
  v += family.marginal_log_pdf(a1, sl1) + family.marginal_log_pdf(a1, su1);
  v += pow_log_term(G1_l, l1 - 1);
  v += pow_log_term(1.0 - G1_u, n - u1);
  // Margin-2 bound points restricted to the margin-1 strip.
  for (double s2 : {sl2, su2}) {
    const double dG = family.conditional_cdf(a2, s2, su1) -
                      family.conditional_cdf(a2, s2, sl1);
    v += pow_log_term(dG, 1.0) + family.marginal_log_pdf(a2, s2);
  }
  // Strip regions below, inside, and above the nested rectangle.
  const double below = joint_cdf(su1, sl2) - joint_cdf(sl1, sl2);
  const double inside = joint_cdf(su1, su2) - joint_cdf(sl1, su2) -
                        joint_cdf(su1, sl2) + joint_cdf(sl1, sl2);
  const double above = (G1_u - G1_l) - (joint_cdf(su1, su2) - joint_cdf(sl1, su2));
  v += pow_log_term(below, l2 - 1);
  v += pow_log_term(inside, u2 - l2 - 1);
  v += pow_log_term(above, u1 - l1 - u2 - 1);
  return {std::isnan(v) ? kNegInf : v, true};
}

LogLik loglik_rect_iter_seg(const OrderRectSymbol& sym, const Family& family) {
  check_order_rect(sym, RectConstruction::IterSeg);
  if (family.dim() != 2)
    throw std::invalid_argument("loglik_rect_iter_seg: bivariate family required");
  const int n = sym.n, l1 = sym.l[0], u1 = sym.u[0], l2 = sym.l[1], u2 = sym.u[1];
  if (!(1 <= l1 && l1 < u1 && u1 <= n && 1 <= l2 && l2 < l1 - 1 && 1 <= u2 &&
        u2 < n - u1))
    throw std::invalid_argument("loglik_rect_iter_seg: order constraints violated");
  if (sym.s_l[0] > sym.s_u[0]) return {kNegInf, true};

  const auto [a1, a2] = axis_view(sym);
  const double sl1 = sym.s_l[0], su1 = sym.s_u[0], sl2 = sym.s_l[1], su2 = sym.s_u[1];
  auto joint_cdf = [&](double v1, double v2) {
    return a1 == 1 ? family.cdf(v1, v2) : family.cdf(v2, v1);
  };
  const double G1_l = family.marginal_cdf(a1, sl1);
  const double G1_u = family.marginal_cdf(a1, su1);
  const double G2_u = family.marginal_cdf(a2, su2);
  const double G_ll = joint_cdf(sl1, sl2);
  const double G_uu = joint_cdf(su1, su2);

  double v = log_factorial(n) - log_factorial(l2 - 1) - log_factorial(l1 - l2 - 1) -
             log_factorial(u1 - l1 - 1) - log_factorial(u2 - 1) -
             log_factorial(n - u1 - u2);
  // Margin-1 bound points and the central band.
  v += family.marginal_log_pdf(a1, sl1) + family.marginal_log_pdf(a1, su1);
  v += pow_log_term(G1_u - G1_l, u1 - l1 - 1);
  // Margin-2 lower bound point, restricted to the lower-left segment.
  v += family.marginal_log_pdf(a2, sl2);
  v += pow_log_term(family.conditional_cdf(a2, sl2, sl1), 1.0);
  // Margin-2 upper bound point, restricted to the upper-right segment.
  v += family.marginal_log_pdf(a2, su2);
  v += pow_log_term(1.0 - family.conditional_cdf(a2, su2, su1), 1.0);
  // Counted regions: below-left, above-left, below-right, above-right.
  v += pow_log_term(G_ll, l2 - 1);
  v += pow_log_term(G1_l - G_ll, l1 - l2 - 1);
  v += pow_log_term(G2_u - G_uu, u2 - 1);
  v += pow_log_term(1.0 - G1_u - G2_u + G_uu, n - u1 - u2);
  return {std::isnan(v) ? kNegInf : v, true};
}

LogLik loglik_rect_marginal_orders(const OrderRectSymbol& sym,
                                   std::span<const Family> margins) {
  if (sym.construction != RectConstruction::Marginal)
    throw std::invalid_argument("loglik_rect_marginal_orders: wrong construction");
  if (margins.size() != static_cast<std::size_t>(sym.d()))
    throw std::invalid_argument("loglik_rect_marginal_orders: margin count mismatch");
  double v = 0.0;
  for (int j = 0; j < sym.d(); ++j) {
    if (margins[j].dim() != 1)
      throw std::invalid_argument("loglik_rect_marginal_orders: margins must be univariate");
    IntervalSymbol m;
    m.s_l = sym.s_l[j];
    m.s_u = sym.s_u[j];
    m.l = sym.l[j];
    m.u = sym.u[j];
    m.n = sym.n;
    v += loglik_interval(m, margins[j]).value;
  }
  return {std::isnan(v) ? kNegInf : v, true};
}

LogLik loglik_hist_fixed(const FixedBinHistogramSymbol& sym, const Family& family) {
  const int d = sym.d();
  if (d != family.dim())
    throw std::invalid_argument("loglik_hist_fixed: dimension mismatch");
  const auto extents = sym.bin_extents();
  long total_count = 0;
  for (long c : sym.counts) total_count += c;
  if (total_count != sym.n)
    throw std::invalid_argument("loglik_hist_fixed: counts do not sum to n");

  // Mass over the grid hull; bin probabilities are rescaled by it when
  // the family support extends past the hull.
  std::vector<double> hull_lo(d), hull_hi(d);
  for (int j = 0; j < d; ++j) {
    hull_lo[j] = sym.grids[j].front();
    hull_hi[j] = sym.grids[j].back();
  }
  const double hull_mass = family.rect_prob(hull_lo, hull_hi);

  double v = log_factorial(sym.n);
  std::vector<int> idx(d, 0);
  std::vector<double> lo(d), hi(d);
  for (std::size_t off = 0; off < sym.counts.size(); ++off) {
    const long c = sym.counts[off];
    v -= log_factorial(c);
    if (c > 0) {
      for (int j = 0; j < d; ++j) {
        lo[j] = sym.grids[j][idx[j]];
        hi[j] = sym.grids[j][idx[j] + 1];
      }
      const double p = hull_mass > 0.0 ? family.rect_prob(lo, hi) / hull_mass : 0.0;
      v += pow_log_term(p, static_cast<double>(c));
    }
    // Advance the row-major multi-index.
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < extents[j]) break;
      idx[j] = 0;
    }
  }
  return {std::isnan(v) ? kNegInf : v, true};
}

LogLik loglik_hist_random(const RandomBinHistogramSymbol& sym, const Family& family) {
  if (family.dim() != 1)
    throw std::invalid_argument("loglik_hist_random: family must be univariate");
  const int B = sym.B();
  if (B < 1 || static_cast<int>(sym.k.size()) != B)
    throw std::invalid_argument("loglik_hist_random: malformed symbol");
  for (int b = 0; b < B; ++b) {
    if (sym.k[b] < 1 || sym.k[b] > sym.n || (b > 0 && sym.k[b] <= sym.k[b - 1]))
      throw std::invalid_argument("loglik_hist_random: invalid order indices");
    if (b > 0 && sym.s[b] < sym.s[b - 1])
      throw std::invalid_argument("loglik_hist_random: s must be nondecreasing");
  }
  double v = log_factorial(sym.n);
  for (int b = 0; b < B; ++b) v += family.log_pdf(sym.s[b]);
  for (int b = 0; b <= B; ++b) {
    const double g_lo = b == 0 ? 0.0 : family.cdf(sym.s[b - 1]);
    const double g_hi = b == B ? 1.0 : family.cdf(sym.s[b]);
    const int k_lo = b == 0 ? 0 : sym.k[b - 1];
    const int k_hi = b == B ? sym.n + 1 : sym.k[b];
    const int gap = k_hi - k_lo - 1;
    v += pow_log_term(g_hi - g_lo, gap) - log_factorial(gap);
  }
  return {std::isnan(v) ? kNegInf : v, true};
}

LogLik classical_loglik(const DataMatrix& X, const Family& family) {
  if (X.d != family.dim()) throw std::invalid_argument("classical_loglik: dimension mismatch");
  // Neumaier compensated summation; the result is independent of any
  // planned evaluation order.
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < X.n; ++i) {
    const double term =
        X.d == 1 ? family.log_pdf(X(i, 0)) : family.log_pdf(X(i, 0), X(i, 1));
    if (term == kNegInf) return {kNegInf, true};
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return {sum + comp, true};
}

namespace {

double one_symbol_loglik(const Symbol& s, const Family& family, const EvalOptions& opts,
                         const RectConfigProbs* config) {
  if (const auto* v = std::get_if<IntervalSymbol>(&s)) return loglik_interval(*v, family).value;
  if (const auto* v = std::get_if<RectMinMaxSymbol>(&s)) {
    switch (opts.rect_mode) {
      case RectMode::Full: return loglik_rect_full(*v, family).value;
      case RectMode::ForceP4: return loglik_rect_2d(*v, family).value;
      case RectMode::Marginalized:
        return loglik_rect_marginalized(*v, family, *config).value;
    }
  }
  if (const auto* v = std::get_if<OrderRectSymbol>(&s)) {
    switch (v->construction) {
      case RectConstruction::SeqNest: return loglik_rect_seq_nest(*v, family).value;
      case RectConstruction::IterSeg: return loglik_rect_iter_seg(*v, family).value;
      case RectConstruction::Marginal: {
        if (family.dim() == 1) {
          const Family margins[] = {family};
          return loglik_rect_marginal_orders(*v, margins).value;
        }
        const Family margins[] = {family.margin(v->axis_order[0]),
                                  family.margin(v->axis_order[1])};
        return loglik_rect_marginal_orders(*v, margins).value;
      }
    }
  }
  if (const auto* v = std::get_if<FixedBinHistogramSymbol>(&s))
    return loglik_hist_fixed(*v, family).value;
  if (const auto* v = std::get_if<RandomBinHistogramSymbol>(&s))
    return loglik_hist_random(*v, family).value;
  throw std::logic_error("one_symbol_loglik: unhandled symbol type");
}

}  // namespace

LogLik dataset_loglik(std::span<const Symbol> symbols, const Family& family,
                      const EvalOptions& opts) {
  if (symbols.empty()) throw std::invalid_argument("dataset_loglik: no symbols");
  const std::size_t type0 = symbols.front().index();
  for (const auto& s : symbols)
    if (s.index() != type0)
      throw std::invalid_argument("dataset_loglik: mixed symbol types");

  // Configuration probabilities depend only on (theta, n); share them
  // across symbols with equal n.
  std::vector<std::pair<int, RectConfigProbs>> config_cache;
  auto config_for = [&](int n) -> const RectConfigProbs* {
    for (const auto& [cn, probs] : config_cache)
      if (cn == n) return &probs;
    config_cache.emplace_back(
        n, estimate_rect_config_probs(family, n, opts.mc_samples, RngStream(opts.mc_seed)));
    return &config_cache.back().second;
  };

  double sum = 0.0;
  for (const auto& s : symbols) {
    const RectConfigProbs* config = nullptr;
    if (opts.rect_mode == RectMode::Marginalized &&
        std::holds_alternative<RectMinMaxSymbol>(s))
      config = config_for(symbol_count(s));
    const double v = one_symbol_loglik(s, family, opts, config);
    if (v == kNegInf) return {kNegInf, true};
    sum += v;
  }
  return {std::isnan(sum) ? kNegInf : sum, true};
}

}  // namespace symlik
