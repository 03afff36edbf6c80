#pragma once

#include <string>
#include <vector>

#include "symlik/data_matrix.hpp"

namespace symlik {

// Reads a headered CSV of numeric columns into a DataMatrix. A column
// named "class" (any position) becomes the integer class labels. Parse
// failures raise DataError naming the offending line.
DataMatrix read_csv_matrix(const std::string& path);
DataMatrix parse_csv_matrix(const std::string& text, const std::string& origin = "<csv>");

struct CsvWriter {
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  std::string format(double v) const;  // full round-trip precision

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace symlik
