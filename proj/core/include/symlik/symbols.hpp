#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "symlik/data_matrix.hpp"

namespace symlik {

// Univariate interval (x_(l), x_(u), n) from two order statistics.
struct IntervalSymbol {
  double s_l = 0, s_u = 0;
  int n = 0;
  int l = 0, u = 0;  // 1-based order indices, l < u
};

// Bounding box with construction-point count p and defining locations.
// p = 2: locations holds the two corner points; p = 3: the single corner
// point; p = 4 (2d): empty.
struct RectMinMaxSymbol {
  std::vector<double> s_min, s_max;    // length d
  int p = 0;
  std::vector<std::array<double, 2>> locations;
  int n = 0;
  int d() const { return static_cast<int>(s_min.size()); }
};

enum class RectConstruction { Marginal, SeqNest, IterSeg };

// The convention for the upper bound taken inside the upper segment of an
// iterative-segmentation rectangle: u2 counted from the bottom or the top
// of that subset. FromBottom is validated by the Monte Carlo density
// oracle; FromTop exists as the rejected alternative.
enum class UpperIndexConvention { FromBottom, FromTop };

// Rectangle from marginal order statistics; the construction determines
// which subset each margin's order statistics are taken over.
struct OrderRectSymbol {
  std::vector<double> s_l, s_u;   // length d
  std::vector<int> l, u;          // 1-based order indices per margin
  int n = 0;
  RectConstruction construction = RectConstruction::Marginal;
  std::vector<int> axis_order;    // 1-based permutation of margins
  int d() const { return static_cast<int>(s_l.size()); }
};

// Random counts over a fixed grid; counts are row-major over the bin
// lattice with extents B_j = grids[j].size() - 1.
struct FixedBinHistogramSymbol {
  std::vector<std::vector<double>> grids;  // strictly increasing edges per margin
  std::vector<long> counts;
  int n = 0;
  int d() const { return static_cast<int>(grids.size()); }
  std::vector<int> bin_extents() const;
};

// Fixed counts between random bin edges given by order statistics.
struct RandomBinHistogramSymbol {
  std::vector<double> s;  // nondecreasing order-statistic values
  std::vector<int> k;     // strictly increasing 1-based order indices
  int n = 0;
  int B() const { return static_cast<int>(s.size()); }
};

using Symbol = std::variant<IntervalSymbol, RectMinMaxSymbol, OrderRectSymbol,
                            FixedBinHistogramSymbol, RandomBinHistogramSymbol>;

int symbol_count(const Symbol& s);
std::string symbol_type_name(const Symbol& s);

// Aggregation functions. All are deterministic and permutation-invariant
// in the rows of their input.

IntervalSymbol make_interval(std::span<const double> x, int l, int u);

// Requires unique rows at each marginal extreme (TieError otherwise) and
// n >= 2; d = 2 only.
RectMinMaxSymbol make_rect_minmax(const DataMatrix& X);

OrderRectSymbol make_rect_marginal(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u);

// Margin 1 order statistics over all rows; margin 2 over the rows strictly
// inside the margin-1 interval. Requires 2 <= u2 <= u1 - l1 - 1.
OrderRectSymbol make_rect_seq_nest(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u,
                                   std::span<const int> axis_order);

// Margin 1 order statistics over all rows; margin-2 lower bound over the
// rows strictly below the margin-1 lower bound, upper bound over the rows
// strictly above the margin-1 upper bound. Requires l2 < l1 - 1 and
// u2 < n - u1.
OrderRectSymbol make_rect_iter_seg(const DataMatrix& X, std::span<const int> l,
                                   std::span<const int> u,
                                   std::span<const int> axis_order,
                                   UpperIndexConvention convention =
                                       UpperIndexConvention::FromBottom);

// Half-open (left, right] bins, leftmost edge inclusive; rows outside the
// grid hull raise DataError.
FixedBinHistogramSymbol make_hist_fixed(const DataMatrix& X,
                                        std::vector<std::vector<double>> grids);

RandomBinHistogramSymbol make_hist_random(std::span<const double> x,
                                          std::span<const int> k);

// Row-major offset into a fixed-bin count tensor.
std::size_t bin_offset(const std::vector<int>& extents, const std::vector<int>& idx);

}  // namespace symlik
