#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "growthrates/errors.hpp"

namespace growthrates {

using Vector = std::vector<double>;

// Dense row-major matrix. Entries are validated to be finite when the matrix
// is built from user data (file loaders, factory helpers); hot-path writes
// through operator() are unchecked.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, Vector entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

// Compensated (Neumaier) reductions; every dot product and norm in the
// library goes through these so that contraction-factor measurements stay
// meaningful near machine precision.
double csum(std::span<const double> values);
double cdot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> v);
double norm(std::span<const double> v);

Vector matvec(const Matrix& a, const Vector& x);             // A x
Vector matvec_transposed(const Matrix& a, const Vector& y);  // A^T y

Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Vector& a, double s);
void axpy(double alpha, const Vector& x, Vector& y);  // y += alpha x
double distance_sq(const Vector& a, const Vector& b);

struct SvdResult {
  Matrix u;      // m x k, orthonormal columns where sigma > 0
  Vector sigma;  // k = min(m, n), descending, nonnegative
  Matrix v;      // n x k
};

// One-sided Jacobi SVD. Dependency-free and accurate for the desk-scale
// matrices this library targets (<= ~2000 x 2000).
SvdResult svd(const Matrix& a);

Vector singular_values(const Matrix& a);

double spectral_norm(const Matrix& a);

// A singular value counts as nonzero iff sigma > kRankTolerance * sigma_max.
inline constexpr double kRankTolerance = 1e-10;

double sigma_min_nonzero(const Matrix& a);
std::size_t numerical_rank(const Matrix& a);

// Euclidean projection onto {z : A z = t}, reusable across many points.
// Built once from the SVD of A; rank-deficient A is handled through the
// pseudo-inverse.
class AffineProjector {
 public:
  AffineProjector(Matrix a, Vector t);

  // Projection of x; does not verify that the system is consistent.
  Vector project(const Vector& x) const;
  double residual(const Vector& x) const;  // ||A x - t||
  // Consistency of A z = t: the min-norm residual must be small.
  bool consistent(double tol = 1e-9) const;

  const Matrix& equality_matrix() const { return a_; }
  const Vector& rhs() const { return t_; }

 private:
  Matrix a_;
  Vector t_;
  SvdResult svd_;
  double sigma_max_ = 0.0;
};

// One-shot projection of x onto {z : A z = t}. Throws InfeasibleError when
// the system is inconsistent (min-norm residual above 1e-9 * (1 + ||t||)).
Vector project_affine(const Vector& x, const Matrix& a, const Vector& t);

}  // namespace growthrates
