#pragma once

#include <cmath>

#include "growthrates/linalg.hpp"
#include "growthrates/rng.hpp"

namespace test_helpers {

using growthrates::Matrix;
using growthrates::Rng;
using growthrates::Vector;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// rows x cols Gaussian matrix with the given rank (rows, cols >= rank).
inline Matrix random_rank_deficient(std::size_t rows, std::size_t cols, std::size_t rank,
                                    std::uint64_t seed) {
  Rng rng(seed);
  Matrix b(rows, rank);
  Matrix c(rank, cols);
  for (auto& v : b.data()) v = rng.normal();
  for (auto& v : c.data()) v = rng.normal();
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += b(i, k) * c(k, j);
      out(i, j) = s;
    }
  return out;
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_vector(n);
}

}  // namespace test_helpers
