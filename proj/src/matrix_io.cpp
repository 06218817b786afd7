#include "growthrates/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace growthrates {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_matrix(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source_name + ":1: missing header line");
  std::istringstream header(line);
  long long rows = -1, cols = -1;
  if (!(header >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParseError(source_name + ":1: expected \"rows cols\"");
  }
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(source_name + ":" + std::to_string(i + 2) + ": unexpected end of file");
    }
    std::istringstream row(line);
    for (long long j = 0; j < cols; ++j) {
      double v;
      if (!(row >> v)) {
        throw ParseError(source_name + ":" + std::to_string(i + 2) + ": expected " +
                         std::to_string(cols) + " values");
      }
      if (!std::isfinite(v)) {
        throw ParseError(source_name + ":" + std::to_string(i + 2) + ": non-finite value");
      }
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
    }
    double extra;
    if (row >> extra) {
      throw ParseError(source_name + ":" + std::to_string(i + 2) + ": too many values");
    }
  }
  return m;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_matrix(in, path.string());
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix(out, m);
}

Vector read_vector_file(const std::filesystem::path& path) {
  Matrix m = read_matrix_file(path);
  if (m.cols() == 1 || m.rows() == 1 || m.empty()) return m.data();
  throw ParseError(path.string() + ": expected a vector (n x 1 or 1 x n)");
}

void write_vector_file(const std::filesystem::path& path, const Vector& v) {
  write_matrix_file(path, vector_as_column(v));
}

Matrix vector_as_column(const Vector& v) { return Matrix(v.size(), 1, v); }

}  // namespace growthrates
