#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace symlik {

// Error raised for defects in user-supplied data (parse failures, ties
// where uniqueness is required, points outside a histogram hull, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TieError : DataError {
  using DataError::DataError;
};

// Micro-data sample: n rows by d columns, row-major, with optional
// integer class labels of length n.
struct DataMatrix {
  std::vector<double> values;
  int n = 0;
  int d = 0;
  std::vector<int> class_labels;  // empty when absent

  DataMatrix() = default;
  DataMatrix(int n_, int d_) : values(static_cast<std::size_t>(n_) * d_), n(n_), d(d_) {}

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * d + j]; }
  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * d + j];
  }

  std::vector<double> column(int j) const {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = (*this)(i, j);
    return out;
  }

  bool has_labels() const { return !class_labels.empty(); }

  // Rows belonging to one class, labels dropped.
  DataMatrix rows_for_class(int label) const;

  // Sorted distinct labels; {0} when no label column is present.
  std::vector<int> distinct_labels() const;

  void validate() const;
};

}  // namespace symlik
