#include "symlik/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace symlik {

namespace {

double order_stat(std::vector<double> v, int k) {  // k is 1-based
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[k - 1];
}

void check_axis_order(std::span<const int> axis_order, int d) {
  if (static_cast<int>(axis_order.size()) != d)
    throw std::invalid_argument("axis_order: wrong length");
  std::set<int> seen(axis_order.begin(), axis_order.end());
  if (static_cast<int>(seen.size()) != d || *seen.begin() != 1 || *seen.rbegin() != d)
    throw std::invalid_argument("axis_order: not a permutation of 1..d");
}

}  // namespace

int symbol_count(const Symbol& s) {
  return std::visit([](const auto& v) { return v.n; }, s);
}

std::string symbol_type_name(const Symbol& s) {
  struct Visitor {
    std::string operator()(const IntervalSymbol&) const { return "interval"; }
    std::string operator()(const RectMinMaxSymbol&) const { return "rect_minmax"; }
    std::string operator()(const OrderRectSymbol&) const { return "rect_order"; }
    std::string operator()(const FixedBinHistogramSymbol&) const { return "hist_fixed"; }
    std::string operator()(const RandomBinHistogramSymbol&) const { return "hist_random"; }
  };
  return std::visit(Visitor{}, s);
}

std::vector<int> FixedBinHistogramSymbol::bin_extents() const {
  std::vector<int> b(grids.size());
  for (std::size_t j = 0; j < grids.size(); ++j)
    b[j] = static_cast<int>(grids[j].size()) - 1;
  return b;
}

std::size_t bin_offset(const std::vector<int>& extents, const std::vector<int>& idx) {
  std::size_t off = 0;
  for (std::size_t j = 0; j < extents.size(); ++j)
    off = off * extents[j] + idx[j];
  return off;
}

IntervalSymbol make_interval(std::span<const double> x, int l, int u) {
  const int n = static_cast<int>(x.size());
  if (l < 1 || u > n) throw std::out_of_range("make_interval: order index out of range");
  if (l >= u) throw std::invalid_argument("make_interval: requires l < u");
  std::vector<double> v(x.begin(), x.end());
  IntervalSymbol sym;
  sym.s_l = order_stat(v, l);
  sym.s_u = order_stat(std::move(v), u);
  sym.n = n;
  sym.l = l;
  sym.u = u;
  return sym;
}

RectMinMaxSymbol make_rect_minmax(const DataMatrix& X) {
  if (X.d != 2) throw std::invalid_argument("make_rect_minmax: d must be 2");
  if (X.n < 2) throw DataError("make_rect_minmax: need at least 2 rows");
  const int n = X.n;
  // Row attaining each of the four marginal extremes; must be unique.
  int arg[4] = {0, 0, 0, 0};  // min1, max1, min2, max2
  for (int i = 1; i < n; ++i) {
    if (X(i, 0) < X(arg[0], 0)) arg[0] = i;
    if (X(i, 0) > X(arg[1], 0)) arg[1] = i;
    if (X(i, 1) < X(arg[2], 1)) arg[2] = i;
    if (X(i, 1) > X(arg[3], 1)) arg[3] = i;
  }
  const double extreme[4] = {X(arg[0], 0), X(arg[1], 0), X(arg[2], 1), X(arg[3], 1)};
  for (int e = 0; e < 4; ++e) {
    const int col = e < 2 ? 0 : 1;
    int hits = 0;
    for (int i = 0; i < n; ++i)
      if (X(i, col) == extreme[e]) ++hits;
    if (hits > 1) throw TieError("make_rect_minmax: marginal extreme attained by ties");
  }
  std::set<int> defining(arg, arg + 4);

  RectMinMaxSymbol sym;
  sym.s_min = {extreme[0], extreme[2]};
  sym.s_max = {extreme[1], extreme[3]};
  sym.n = n;
  sym.p = static_cast<int>(defining.size());
  if (sym.p == 2) {
    for (int row : defining) sym.locations.push_back({X(row, 0), X(row, 1)});
  } else if (sym.p == 3) {
    // The corner point is the row attaining two extremes.
    int counts[4] = {0, 0, 0, 0};
    int slot = 0;
    int rows[4];
    for (int row : defining) rows[slot++] = row;
    for (int r = 0; r < slot; ++r)
      for (int e = 0; e < 4; ++e)
        if (arg[e] == rows[r]) ++counts[r];
    for (int r = 0; r < slot; ++r)
      if (counts[r] == 2) sym.locations.push_back({X(rows[r], 0), X(rows[r], 1)});
  }
  return sym;
}

OrderRectSymbol make_rect_marginal(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u) {
  const int d = X.d;
  if (static_cast<int>(l.size()) != d || static_cast<int>(u.size()) != d)
    throw std::invalid_argument("make_rect_marginal: index vector length mismatch");
  OrderRectSymbol sym;
  sym.n = X.n;
  sym.construction = RectConstruction::Marginal;
  for (int j = 0; j < d; ++j) {
    if (l[j] < 1 || u[j] > X.n || l[j] >= u[j])
      throw std::invalid_argument("make_rect_marginal: bad order indices");
    auto col = X.column(j);
    sym.s_l.push_back(order_stat(col, l[j]));
    sym.s_u.push_back(order_stat(std::move(col), u[j]));
    sym.l.push_back(l[j]);
    sym.u.push_back(u[j]);
    sym.axis_order.push_back(j + 1);
  }
  return sym;
}

namespace {

void check_distinct(const std::vector<double>& col, const char* what) {
  std::vector<double> v = col;
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw TieError(std::string(what) + ": tied coordinate values");
}

}  // namespace

OrderRectSymbol make_rect_seq_nest(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u,
                                   std::span<const int> axis_order) {
  if (X.d != 2) throw std::invalid_argument("make_rect_seq_nest: d must be 2");
  check_axis_order(axis_order, 2);
  if (l.size() != 2 || u.size() != 2)
    throw std::invalid_argument("make_rect_seq_nest: index vector length mismatch");
  const int n = X.n;
  const int l1 = l[0], u1 = u[0], l2 = l[1], u2 = u[1];
  if (l1 < 1 || u1 > n || l1 >= u1)
    throw std::invalid_argument("make_rect_seq_nest: bad first-margin indices");
  if (l2 < 1 || l2 >= u2) throw std::invalid_argument("make_rect_seq_nest: bad l2/u2");
  if (u2 < 2 || u2 > u1 - l1 - 1)
    throw std::invalid_argument("make_rect_seq_nest: requires 2 <= u2 <= u1 - l1 - 1");

  const int a0 = axis_order[0] - 1, a1 = axis_order[1] - 1;
  auto first = X.column(a0);
  auto second = X.column(a1);
  check_distinct(first, "make_rect_seq_nest");
  check_distinct(second, "make_rect_seq_nest");

  const double sl1 = order_stat(first, l1);
  const double su1 = order_stat(first, u1);
  std::vector<double> inner;
  for (int i = 0; i < n; ++i)
    if (first[i] > sl1 && first[i] < su1) inner.push_back(second[i]);
  if (static_cast<int>(inner.size()) != u1 - l1 - 1)
    throw DataError("make_rect_seq_nest: unexpected interior count");
  if (u2 > static_cast<int>(inner.size()))
    throw std::invalid_argument("make_rect_seq_nest: insufficient rows in nested subset");

  OrderRectSymbol sym;
  sym.n = n;
  sym.construction = RectConstruction::SeqNest;
  sym.s_l = {sl1, order_stat(inner, l2)};
  sym.s_u = {su1, order_stat(std::move(inner), u2)};
  sym.l = {l1, l2};
  sym.u = {u1, u2};
  sym.axis_order.assign(axis_order.begin(), axis_order.end());
  return sym;
}

OrderRectSymbol make_rect_iter_seg(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u,
                                   std::span<const int> axis_order,
                                   UpperIndexConvention convention) {
  if (X.d != 2) throw std::invalid_argument("make_rect_iter_seg: d must be 2");
  check_axis_order(axis_order, 2);
  if (l.size() != 2 || u.size() != 2)
    throw std::invalid_argument("make_rect_iter_seg: index vector length mismatch");
  const int n = X.n;
  const int l1 = l[0], u1 = u[0], l2 = l[1], u2 = u[1];
  if (l1 < 1 || u1 > n || l1 >= u1)
    throw std::invalid_argument("make_rect_iter_seg: bad first-margin indices");
  if (l2 < 1 || u2 < 1) throw std::invalid_argument("make_rect_iter_seg: bad l2/u2");
  if (!(l2 < l1 - 1)) throw std::invalid_argument("make_rect_iter_seg: requires l2 < l1 - 1");
  if (!(u2 < n - u1)) throw std::invalid_argument("make_rect_iter_seg: requires u2 < n - u1");

  const int a0 = axis_order[0] - 1, a1 = axis_order[1] - 1;
  auto first = X.column(a0);
  auto second = X.column(a1);
  check_distinct(first, "make_rect_iter_seg");
  check_distinct(second, "make_rect_iter_seg");

  const double sl1 = order_stat(first, l1);
  const double su1 = order_stat(first, u1);
  std::vector<double> below, above;
  for (int i = 0; i < n; ++i) {
    if (first[i] < sl1) below.push_back(second[i]);
    if (first[i] > su1) above.push_back(second[i]);
  }
  if (static_cast<int>(below.size()) != l1 - 1 ||
      static_cast<int>(above.size()) != n - u1)
    throw DataError("make_rect_iter_seg: unexpected segment counts");

  const int upper_rank = convention == UpperIndexConvention::FromBottom
                             ? u2
                             : static_cast<int>(above.size()) - u2 + 1;

  OrderRectSymbol sym;
  sym.n = n;
  sym.construction = RectConstruction::IterSeg;
  sym.s_l = {sl1, order_stat(std::move(below), l2)};
  sym.s_u = {su1, order_stat(std::move(above), upper_rank)};
  sym.l = {l1, l2};
  sym.u = {u1, u2};
  sym.axis_order.assign(axis_order.begin(), axis_order.end());
  return sym;
}

FixedBinHistogramSymbol make_hist_fixed(const DataMatrix& X,
                                        std::vector<std::vector<double>> grids) {
  if (static_cast<int>(grids.size()) != X.d)
    throw std::invalid_argument("make_hist_fixed: grid dimension mismatch");
  for (const auto& g : grids) {
    if (g.size() < 2) throw std::invalid_argument("make_hist_fixed: grid needs >= 1 bin");
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1]))
        throw std::invalid_argument("make_hist_fixed: edges must be strictly increasing");
  }
  FixedBinHistogramSymbol sym;
  sym.grids = std::move(grids);
  sym.n = X.n;
  const auto extents = sym.bin_extents();
  std::size_t total = 1;
  for (int b : extents) total *= static_cast<std::size_t>(b);
  sym.counts.assign(total, 0);

  std::vector<int> idx(X.d);
  for (int i = 0; i < X.n; ++i) {
    for (int j = 0; j < X.d; ++j) {
      const auto& g = sym.grids[j];
      const double x = X(i, j);
      if (x < g.front() || x > g.back())
        throw DataError("make_hist_fixed: data outside grid hull");
      if (x == g.front()) {
        idx[j] = 0;  // leftmost edge inclusive
      } else {
        auto it = std::lower_bound(g.begin() + 1, g.end(), x);
        idx[j] = static_cast<int>(it - g.begin()) - 1;
      }
    }
    ++sym.counts[bin_offset(extents, idx)];
  }
  return sym;
}

RandomBinHistogramSymbol make_hist_random(std::span<const double> x,
                                          std::span<const int> k) {
  const int n = static_cast<int>(x.size());
  if (k.empty()) throw std::invalid_argument("make_hist_random: k is empty");
  for (std::size_t b = 0; b < k.size(); ++b) {
    if (k[b] < 1 || k[b] > n)
      throw std::out_of_range("make_hist_random: order index out of range");
    if (b > 0 && k[b] <= k[b - 1])
      throw std::invalid_argument("make_hist_random: k must be strictly increasing");
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  RandomBinHistogramSymbol sym;
  sym.n = n;
  sym.k.assign(k.begin(), k.end());
  for (int kb : sym.k) sym.s.push_back(sorted[kb - 1]);
  return sym;
}

}  // namespace symlik
