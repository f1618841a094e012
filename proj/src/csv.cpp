#include "nfsic/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace nfsic {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix load_matrix_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  bool first_data_line = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      const char* begin = cell.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw ParseError(path + ": row " + std::to_string(line_no) +
                         ", column " + std::to_string(col) +
                         ": not a number: '" + cell + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(path + ": row " + std::to_string(line_no) +
                         ", column " + std::to_string(col) +
                         ": non-finite value '" + cell + "'");
      }
      row.push_back(v);
    }
    if (first_data_line) {
      width = row.size();
      first_data_line = false;
    } else if (row.size() != width) {
      throw ParseError(path + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || width == 0) {
    throw ParseError(path + ": no numeric data");
  }

  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);  // LF endings on all platforms
  if (!out) throw ParseError("cannot write '" + path + "'");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace nfsic
