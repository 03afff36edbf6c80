#include "symlik/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace symlik {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

DataMatrix parse_csv_matrix(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw DataError(origin + ": empty file");
  ++lineno;
  auto header = split_line(line);
  int class_col = -1;
  std::vector<int> value_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (trim(header[j]) == "class")
      class_col = static_cast<int>(j);
    else
      value_cols.push_back(static_cast<int>(j));
  }
  if (value_cols.empty()) throw DataError(origin + ": no numeric columns in header");

  DataMatrix out;
  out.d = static_cast<int>(value_cols.size());
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError(origin + ": line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()));
    auto parse_double = [&](const std::string& raw) {
      const std::string t = trim(raw);
      double v;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
        throw DataError(origin + ": line " + std::to_string(lineno) +
                        ": bad numeric value '" + t + "'");
      return v;
    };
    for (int j : value_cols) out.values.push_back(parse_double(cells[j]));
    if (class_col >= 0) {
      const double v = parse_double(cells[class_col]);
      const int label = static_cast<int>(v);
      if (label != v)
        throw DataError(origin + ": line " + std::to_string(lineno) +
                        ": class label must be an integer");
      out.class_labels.push_back(label);
    }
    ++out.n;
  }
  if (out.n == 0) throw DataError(origin + ": no data rows");
  return out;
}

DataMatrix read_csv_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv_matrix(ss.str(), path);
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw DataError("cannot open for writing: " + path);
  }
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << cells[i];
  }
  impl_->out << '\n';
}

std::string CsvWriter::format(double v) const {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace symlik
