#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "growthrates/linalg.hpp"

namespace growthrates {

// Matrix text format: first line "rows cols", then `rows` lines of `cols`
// space-separated decimal floats. Values are written with 17 significant
// digits so a write/read round trip is exact.
Matrix read_matrix(std::istream& in, const std::string& source_name = "<stream>");
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::filesystem::path& path, const Matrix& m);

// Vectors travel as n x 1 matrices; a 1 x n matrix is accepted on read.
Vector read_vector_file(const std::filesystem::path& path);
void write_vector_file(const std::filesystem::path& path, const Vector& v);

Matrix vector_as_column(const Vector& v);

std::string format_double(double v);  // 17 significant digits

}  // namespace growthrates
