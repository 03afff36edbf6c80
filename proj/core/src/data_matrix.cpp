#include "symlik/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace symlik {

DataMatrix DataMatrix::rows_for_class(int label) const {
  DataMatrix out;
  out.d = d;
  for (int i = 0; i < n; ++i) {
    if (class_labels.empty() || class_labels[i] == label) {
      for (int j = 0; j < d; ++j) out.values.push_back((*this)(i, j));
      ++out.n;
    }
  }
  return out;
}

std::vector<int> DataMatrix::distinct_labels() const {
  if (class_labels.empty()) return {0};
  std::set<int> s(class_labels.begin(), class_labels.end());
  return std::vector<int>(s.begin(), s.end());
}

void DataMatrix::validate() const {
  if (n < 1 || d < 1) throw std::invalid_argument("DataMatrix: n and d must be >= 1");
  if (values.size() != static_cast<std::size_t>(n) * d)
    throw std::invalid_argument("DataMatrix: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("DataMatrix: non-finite entry");
  if (!class_labels.empty() && class_labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("DataMatrix: label length mismatch");
}

}  // namespace symlik
