#include "symlik/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "symlik/fit.hpp"
#include "symlik/gauss.hpp"
#include "symlik/special.hpp"

namespace symlik {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct VectorizedSymbols {
  int dim = 0;
  std::vector<double> values;   // n_sims x dim, row-major
  std::vector<int> configs;     // RectMinMax only
  double at(long i, int j) const { return values[static_cast<std::size_t>(i) * dim + j]; }
};

// Maps a continuous probe vector back to a candidate symbol; returns
// false when the vector violates the symbol's ordering constraints (the
// density is 0 there).
struct SymbolCodec {
  std::function<bool(std::span<const double>, Symbol&)> decode;
  int dim;
};

SymbolCodec make_codec(const OracleSpec& spec, int config = -1) {
  switch (spec.kind) {
    case OracleKind::Interval: {
      const int n = spec.n, l = spec.l[0], u = spec.u[0];
      return {[n, l, u](std::span<const double> v, Symbol& out) {
                if (!(v[0] < v[1])) return false;
                out = IntervalSymbol{v[0], v[1], n, l, u};
                return true;
              },
              2};
    }
    case OracleKind::SeqNest:
    case OracleKind::IterSeg: {
      OrderRectSymbol proto;
      proto.n = spec.n;
      proto.l = spec.l;
      proto.u = spec.u;
      proto.axis_order = spec.axis_order;
      proto.construction = spec.kind == OracleKind::SeqNest ? RectConstruction::SeqNest
                                                            : RectConstruction::IterSeg;
      const bool need_second_order = spec.kind == OracleKind::SeqNest;
      return {[proto, need_second_order](std::span<const double> v, Symbol& out) {
                if (!(v[0] < v[1])) return false;
                if (need_second_order && !(v[2] < v[3])) return false;
                OrderRectSymbol sym = proto;
                sym.s_l = {v[0], v[2]};
                sym.s_u = {v[1], v[3]};
                out = sym;
                return true;
              },
              4};
    }
    case OracleKind::HistRandom: {
      RandomBinHistogramSymbol proto;
      proto.n = spec.n;
      proto.k = spec.k;
      const int B = static_cast<int>(spec.k.size());
      return {[proto, B](std::span<const double> v, Symbol& out) {
                for (int b = 1; b < B; ++b)
                  if (!(v[b] > v[b - 1])) return false;
                RandomBinHistogramSymbol sym = proto;
                sym.s.assign(v.begin(), v.end());
                out = sym;
                return true;
              },
              B};
    }
    case OracleKind::RectMinMax: {
      const int n = spec.n;
      return {[n, config](std::span<const double> v, Symbol& out) {
                if (!(v[0] < v[2] && v[1] < v[3])) return false;  // (min1,min2,max1,max2)
                RectMinMaxSymbol sym;
                sym.n = n;
                sym.s_min = {v[0], v[1]};
                sym.s_max = {v[2], v[3]};
                sym.p = config <= 1 ? 2 : (config <= 5 ? 3 : 4);
                const double min1 = v[0], min2 = v[1], max1 = v[2], max2 = v[3];
                switch (config) {
                  case 0: sym.locations = {{min1, min2}, {max1, max2}}; break;
                  case 1: sym.locations = {{min1, max2}, {max1, min2}}; break;
                  case 2: sym.locations = {{min1, min2}}; break;
                  case 3: sym.locations = {{min1, max2}}; break;
                  case 4: sym.locations = {{max1, max2}}; break;
                  case 5: sym.locations = {{max1, min2}}; break;
                  default: break;
                }
                out = sym;
                return true;
              },
              4};
    }
    default:
      throw std::invalid_argument("make_codec: discrete oracle kind");
  }
}

int classify_minmax(const RectMinMaxSymbol& sym) {
  const double min1 = sym.s_min[0], min2 = sym.s_min[1];
  const double max1 = sym.s_max[0], max2 = sym.s_max[1];
  if (sym.p == 4) return 6;
  if (sym.p == 2) {
    const auto& a = sym.locations[0];
    const bool diag = (a[0] == min1 && a[1] == min2) || (a[0] == max1 && a[1] == max2);
    return diag ? 0 : 1;
  }
  const auto& c = sym.locations[0];
  if (c[0] == min1) return c[1] == min2 ? 2 : 3;
  return c[1] == max2 ? 4 : 5;
}

Symbol simulate_one(const OracleSpec& spec, const Family& family, RngStream& rng) {
  if (spec.kind == OracleKind::HistFixed) {
    // The fixed-bin likelihood rescales bin masses over the grid hull,
    // which models data conditioned to lie inside it; sample accordingly.
    DataMatrix X(spec.n, family.dim());
    for (int i = 0; i < spec.n; ++i) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 100000) throw NumericalError("hist oracle: hull mass too small");
        DataMatrix one = family.sample(1, rng);
        bool inside = true;
        for (int j = 0; j < family.dim(); ++j)
          inside = inside && one(0, j) >= spec.grids[j].front() &&
                   one(0, j) <= spec.grids[j].back();
        if (inside) {
          for (int j = 0; j < family.dim(); ++j) X(i, j) = one(0, j);
          break;
        }
      }
    }
    return make_hist_fixed(X, spec.grids);
  }
  DataMatrix X = family.sample(spec.n, rng);
  switch (spec.kind) {
    case OracleKind::Interval:
      return make_interval(X.column(0), spec.l[0], spec.u[0]);
    case OracleKind::RectMinMax:
      return make_rect_minmax(X);
    case OracleKind::SeqNest:
      return make_rect_seq_nest(X, spec.l, spec.u, spec.axis_order);
    case OracleKind::IterSeg:
      return make_rect_iter_seg(X, spec.l, spec.u, spec.axis_order, spec.convention);
    case OracleKind::HistRandom:
      return make_hist_random(X.column(0), spec.k);
    case OracleKind::HistFixed: break;
  }
  throw std::logic_error("simulate_one: unhandled kind");
}

std::vector<double> symbol_vector(const Symbol& s) {
  if (const auto* v = std::get_if<IntervalSymbol>(&s)) return {v->s_l, v->s_u};
  if (const auto* v = std::get_if<OrderRectSymbol>(&s))
    return {v->s_l[0], v->s_u[0], v->s_l[1], v->s_u[1]};
  if (const auto* v = std::get_if<RandomBinHistogramSymbol>(&s)) return v->s;
  if (const auto* v = std::get_if<RectMinMaxSymbol>(&s))
    return {v->s_min[0], v->s_min[1], v->s_max[0], v->s_max[1]};
  throw std::logic_error("symbol_vector: unsupported type");
}

double default_loglik(const Symbol& s, const Family& family) {
  if (const auto* v = std::get_if<IntervalSymbol>(&s)) return loglik_interval(*v, family).value;
  if (const auto* v = std::get_if<RectMinMaxSymbol>(&s))
    return loglik_rect_full(*v, family).value;
  if (const auto* v = std::get_if<OrderRectSymbol>(&s)) {
    return v->construction == RectConstruction::SeqNest
               ? loglik_rect_seq_nest(*v, family).value
               : loglik_rect_iter_seg(*v, family).value;
  }
  if (const auto* v = std::get_if<FixedBinHistogramSymbol>(&s))
    return loglik_hist_fixed(*v, family).value;
  if (const auto* v = std::get_if<RandomBinHistogramSymbol>(&s))
    return loglik_hist_random(*v, family).value;
  throw std::logic_error("default_loglik: unsupported type");
}

struct Density {
  const SymbolCodec* codec;
  const Family* family;
  const std::function<double(const Symbol&, const Family&)>* eval;

  double operator()(std::span<const double> v) const {
    Symbol s;
    if (!codec->decode(v, s)) return 0.0;
    double ll;
    try {
      ll = (*eval)(s, *family);
    } catch (const std::domain_error&) {
      return 0.0;
    }
    return ll == kNegInf ? 0.0 : std::exp(ll);
  }
};

// Tensor Gauss-Hermite smoothing of the density around probe x:
// scale = sqrt(2) gives E[KDE], scale = 1 (with the 1/(2h sqrt(pi))
// prefactor applied by the caller) gives E[K^2 * f].
double gh_smooth(const Density& f, std::span<const double> x,
                 std::span<const double> h, double scale, int order) {
  const int dim = static_cast<int>(x.size());
  const QuadratureRule& rule = gauss_hermite(order);
  const int m = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(dim, 0);
  std::vector<double> y(dim);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      y[j] = x[j] + scale * h[j] * rule.nodes[idx[j]];
      w *= rule.weights[idx[j]];
    }
    total += w * f(y);
    int j = dim - 1;
    for (; j >= 0; --j) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
    if (j < 0) break;
  }
  return total * std::pow(kPi, -0.5 * dim);
}

struct ContinuousCheck {
  std::vector<double> z_scores;
  std::string detail;
};

// KDE vs smoothed closed form at deterministic probe points taken from
// the simulated symbols themselves.
ContinuousCheck check_continuous(const VectorizedSymbols& sims,
                                 const std::vector<long>& subset,
                                 const Density& density, long n_total, int probes,
                                 const std::string& tag) {
  ContinuousCheck out;
  const int dim = sims.dim;
  const long N = static_cast<long>(subset.size());
  if (N < 1000) {
    out.detail = tag + ": skipped (subset too small)\n";
    return out;
  }
  // Per-component moments and Silverman bandwidths.
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (long i : subset)
    for (int j = 0; j < dim; ++j) mean[j] += sims.at(i, j);
  for (int j = 0; j < dim; ++j) mean[j] /= N;
  for (long i : subset)
    for (int j = 0; j < dim; ++j) {
      const double c = sims.at(i, j) - mean[j];
      sd[j] += c * c;
    }
  std::vector<double> h(dim);
  for (int j = 0; j < dim; ++j) {
    sd[j] = std::sqrt(sd[j] / (N - 1));
    h[j] = sd[j] * std::pow(4.0 / ((dim + 2.0) * N), 1.0 / (dim + 4.0));
  }

  // Probe candidates at quantiles of the first component, skipping
  // points too close to an ordering boundary for the smoothing to see a
  // smooth density.
  std::vector<long> order(subset);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    return sims.at(a, 0) < sims.at(b, 0);
  });
  auto far_from_boundaries = [&](long i) {
    // Require every pair of comparable components to be separated by
    // several bandwidths (specific pairs depend on the symbol kind, but
    // requiring all adjacent-in-value pairs apart is conservative).
    std::vector<double> v(dim);
    for (int j = 0; j < dim; ++j) v[j] = sims.at(i, j);
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        if (std::abs(v[a] - v[b]) < 4.0 * (h[a] + h[b])) return false;
    return true;
  };
  std::vector<long> chosen;
  for (int p = 0; p < probes && static_cast<long>(chosen.size()) < probes; ++p) {
    long pos = static_cast<long>((p + 0.5) / probes * N);
    for (; pos < N; ++pos) {
      if (far_from_boundaries(order[pos])) {
        chosen.push_back(order[pos]);
        break;
      }
    }
  }

  const int order_mean = dim >= 4 ? 16 : 24;
  const int order_var = dim >= 4 ? 8 : 12;
  std::ostringstream detail;
  for (long pi : chosen) {
    std::vector<double> x(dim);
    for (int j = 0; j < dim; ++j) x[j] = sims.at(pi, j);
    // Leave-one-out KDE with a product Gaussian kernel (the probe is a
    // simulated point; its self-term would bias the estimate upward).
    // Normalization by the total simulation count keeps configuration
    // weights part of the value.
    double kde = 0.0;
    for (long i : subset) {
      if (i == pi) continue;
      double q = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double u = (x[j] - sims.at(i, j)) / h[j];
        q += u * u;
      }
      kde += std::exp(-0.5 * q);
    }
    double norm = 1.0;
    for (int j = 0; j < dim; ++j) norm *= h[j] * kSqrt2Pi;
    kde /= norm * (n_total - 1);

    const double mean_smooth = gh_smooth(density, x, h, kSqrt2, order_mean);
    double k2 = gh_smooth(density, x, h, 1.0, order_var);
    for (int j = 0; j < dim; ++j) k2 /= 2.0 * h[j] * std::sqrt(kPi);
    const double var = (k2 - mean_smooth * mean_smooth) / (n_total - 1);
    const double z = var > 0.0 ? (kde - mean_smooth) / std::sqrt(var) : 0.0;
    out.z_scores.push_back(z);
    detail << tag << " probe kde=" << kde << " exact=" << mean_smooth << " z=" << z
           << "\n";
  }
  out.detail = detail.str();
  return out;
}

}  // namespace

OracleReport mc_density_oracle(const OracleSpec& spec, const Family& family,
                               long n_sims, RngStream rng,
                               const OracleOptions& options) {
  if (n_sims < 100000)
    throw std::invalid_argument("mc_density_oracle: n_sims below minimum (1e5)");
  std::function<double(const Symbol&, const Family&)> eval =
      options.loglik_override ? options.loglik_override : default_loglik;

  OracleReport report;
  report.n_sims = n_sims;

  if (spec.kind == OracleKind::HistFixed) {
    // Exact multinomial comparison over count tensors.
    std::map<std::vector<long>, long> freq;
    for (long i = 0; i < n_sims; ++i) {
      Symbol s = simulate_one(spec, family, rng);
      freq[std::get<FixedBinHistogramSymbol>(s).counts] += 1;
    }
    FixedBinHistogramSymbol proto;
    proto.grids = spec.grids;
    proto.n = spec.n;
    // Enumerate all compositions of n over the bins.
    std::size_t bins = 1;
    for (const auto& g : spec.grids) bins *= g.size() - 1;
    std::vector<long> counts(bins, 0);
    double coverage = 0.0;
    std::ostringstream detail;
    std::function<void(std::size_t, long)> recurse = [&](std::size_t pos, long left) {
      if (pos + 1 == bins) {
        counts[pos] = left;
        proto.counts = counts;
        Symbol s = proto;
        double p;
        try {
          p = std::exp(eval(s, family));
        } catch (const std::domain_error&) {
          p = 0.0;
        }
        coverage += p;
        const double expect = p * n_sims;
        if (expect >= 25.0) {
          auto it = freq.find(counts);
          const double observed = it == freq.end() ? 0.0 : it->second;
          const double z = (observed / n_sims - p) / std::sqrt(p * (1.0 - p) / n_sims);
          report.z_scores.push_back(z);
        }
        return;
      }
      for (long c = 0; c <= left; ++c) {
        counts[pos] = c;
        recurse(pos + 1, left - c);
      }
    };
    recurse(0, spec.n);
    detail << "hist_fixed: compositions checked=" << report.z_scores.size()
           << " total probability=" << coverage << "\n";
    // The likelihood must also be a proper distribution over count space;
    // scaled so |coverage - 1| = 1e-10 sits at the z = 4 threshold.
    report.z_scores.push_back((coverage - 1.0) / 2.5e-11);
    report.detail = detail.str();
  } else if (spec.kind == OracleKind::RectMinMax) {
    VectorizedSymbols sims;
    sims.dim = 4;
    sims.values.reserve(n_sims * 4);
    sims.configs.reserve(n_sims);
    for (long i = 0; i < n_sims; ++i) {
      Symbol s = simulate_one(spec, family, rng);
      const auto& r = std::get<RectMinMaxSymbol>(s);
      sims.values.insert(sims.values.end(),
                         {r.s_min[0], r.s_min[1], r.s_max[0], r.s_max[1]});
      sims.configs.push_back(classify_minmax(r));
    }
    std::array<std::vector<long>, 7> by_config;
    for (long i = 0; i < n_sims; ++i) by_config[sims.configs[i]].push_back(i);

    std::ostringstream detail;
    // Distribute probes over configurations by frequency (at least 2 for
    // any configuration with enough mass to check).
    std::array<int, 7> probe_alloc{};
    for (int c = 0; c < 7; ++c) {
      if (static_cast<long>(by_config[c].size()) >= 5000) {
        probe_alloc[c] = std::max(
            2, static_cast<int>(std::lround(static_cast<double>(options.probes) *
                                            by_config[c].size() / n_sims)));
      }
    }
    static const char* config_names[7] = {"p2-diag", "p2-anti", "p3-bl", "p3-tl",
                                          "p3-tr", "p3-br", "p4"};
    for (int c = 0; c < 7; ++c) {
      if (probe_alloc[c] == 0) continue;
      SymbolCodec codec = make_codec(spec, c);
      Density density{&codec, &family, &eval};
      auto check = check_continuous(sims, by_config[c], density, n_sims,
                                    probe_alloc[c], config_names[c]);
      report.z_scores.insert(report.z_scores.end(), check.z_scores.begin(),
                             check.z_scores.end());
      detail << check.detail;
      detail << config_names[c] << ": freq="
             << static_cast<double>(by_config[c].size()) / n_sims << "\n";
    }
    report.detail = detail.str();
  } else {
    SymbolCodec codec = make_codec(spec);
    VectorizedSymbols sims;
    sims.dim = codec.dim;
    sims.values.reserve(n_sims * codec.dim);
    for (long i = 0; i < n_sims; ++i) {
      Symbol s = simulate_one(spec, family, rng);
      auto v = symbol_vector(s);
      sims.values.insert(sims.values.end(), v.begin(), v.end());
    }
    std::vector<long> all(n_sims);
    std::iota(all.begin(), all.end(), 0);
    Density density{&codec, &family, &eval};
    auto check =
        check_continuous(sims, all, density, n_sims, options.probes, "probe");
    report.z_scores = std::move(check.z_scores);
    report.detail = check.detail;
  }

  for (double z : report.z_scores)
    report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
  return report;
}

ConventionResolution resolve_iter_seg_convention(const Family& family, long n_sims,
                                                 RngStream rng) {
  // A configuration where the two conventions give different exponents
  // on the upper segment's regions (u2 - 1 = 2 vs n - u1 - u2 = 7).
  OracleSpec spec;
  spec.kind = OracleKind::IterSeg;
  spec.n = 60;
  spec.l = {7, 3};
  spec.u = {50, 3};
  ConventionResolution res;
  spec.convention = UpperIndexConvention::FromBottom;
  res.from_bottom = mc_density_oracle(spec, family, n_sims, rng.derive(1));
  spec.convention = UpperIndexConvention::FromTop;
  res.from_top = mc_density_oracle(spec, family, n_sims, rng.derive(2));
  const bool a = res.from_bottom.pass();
  const bool b = res.from_top.pass();
  res.resolved = a != b;
  res.chosen = a ? UpperIndexConvention::FromBottom : UpperIndexConvention::FromTop;
  return res;
}

}  // namespace symlik
