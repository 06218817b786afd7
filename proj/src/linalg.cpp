#include "growthrates/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace growthrates {

namespace {

void require_finite(const Vector& entries, const char* what) {
  for (double e : entries) {
    if (!std::isfinite(e)) throw Error(std::string(what) + ": non-finite entry");
  }
}

// Neumaier update: sum += v while tracking the low-order carry.
inline void csum_step(double v, double& sum, double& carry) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v)) {
    carry += (sum - t) + v;
  } else {
    carry += (v - t) + sum;
  }
  sum = t;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw DimensionError("matrix entries do not match rows x cols");
  require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged initializer rows");
    std::size_t j = 0;
    for (double e : row) m(i, j++) = e;
    ++i;
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double csum(std::span<const double> values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) csum_step(v, sum, carry);
  return sum + carry;
}

double cdot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double sum = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) csum_step(a[i] * b[i], sum, carry);
  return sum + carry;
}

double norm_sq(std::span<const double> v) { return cdot(v, v); }

double norm(std::span<const double> v) { return std::sqrt(norm_sq(v)); }

Vector matvec(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw DimensionError("matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = cdot(a.row(i), x);
  return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& y) {
  if (y.size() != a.rows()) throw DimensionError("matvec_transposed: dimension mismatch");
  Vector sum(a.cols(), 0.0), carry(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    const double yi = y[i];
    for (std::size_t j = 0; j < a.cols(); ++j) csum_step(yi * row[j], sum[j], carry[j]);
  }
  for (std::size_t j = 0; j < a.cols(); ++j) sum[j] += carry[j];
  return sum;
}

Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scale(const Vector& a, double s) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double distance_sq(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("distance_sq: length mismatch");
  double sum = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    csum_step(d * d, sum, carry);
  }
  return sum + carry;
}

namespace {

// One-sided Jacobi on a tall matrix (rows >= cols): orthogonalize the
// columns of W by plane rotations accumulated into V, then read singular
// values off the column norms.
SvdResult jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // Column-major working copy.
  std::vector<Vector> w(n, Vector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[j][i] = a(i, j);

  Matrix v = Matrix::identity(n);
  const double tol = 1e-15;
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = norm_sq(w[p]);
        const double aqq = norm_sq(w[q]);
        const double apq = cdot(w[p], w[q]);
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;

        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w[p][i];
          const double wq = w[q][i];
          w[p][i] = c * wp - s * wq;
          w[q][i] = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w[j]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    out.sigma[jj] = sigma[j];
    if (sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, jj) = w[j][i] / sigma[j];
    }
    for (std::size_t i = 0; i < n; ++i) out.v(i, jj) = v(i, j);
  }
  return out;
}

}  // namespace

SvdResult svd(const Matrix& a) {
  if (a.empty()) throw DimensionError("svd: empty matrix");
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  SvdResult t = jacobi_tall(a.transposed());
  return SvdResult{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

Vector singular_values(const Matrix& a) { return svd(a).sigma; }

double spectral_norm(const Matrix& a) {
  if (a.empty()) throw DimensionError("spectral_norm: empty matrix");
  return svd(a).sigma.front();
}

double sigma_min_nonzero(const Matrix& a) {
  const Vector s = singular_values(a);
  const double smax = s.front();
  if (smax == 0.0) throw DegenerateMatrixError("sigma_min_nonzero: all-zero matrix");
  const double threshold = kRankTolerance * smax;
  double result = smax;
  for (double sv : s) {
    if (sv > threshold) result = sv;
  }
  return result;
}

std::size_t numerical_rank(const Matrix& a) {
  const Vector s = singular_values(a);
  const double smax = s.front();
  if (smax == 0.0) return 0;
  std::size_t r = 0;
  for (double sv : s) {
    if (sv > kRankTolerance * smax) ++r;
  }
  return r;
}

AffineProjector::AffineProjector(Matrix a, Vector t) : a_(std::move(a)), t_(std::move(t)) {
  if (a_.empty()) throw DimensionError("affine projector: empty matrix");
  if (t_.size() != a_.rows()) throw DimensionError("affine projector: rhs length mismatch");
  svd_ = svd(a_);
  sigma_max_ = svd_.sigma.front();
}

Vector AffineProjector::project(const Vector& x) const {
  if (x.size() != a_.cols()) throw DimensionError("affine projector: point dimension mismatch");
  // x - A^+ (A x - t), with the pseudo-inverse applied through the SVD.
  Vector r = sub(matvec(a_, x), t_);
  const std::size_t k = svd_.sigma.size();
  Vector coeff(k, 0.0);
  const double threshold = kRankTolerance * sigma_max_;
  for (std::size_t j = 0; j < k; ++j) {
    if (svd_.sigma[j] <= threshold) continue;
    double sum = 0.0, carry2 = 0.0;
    for (std::size_t i = 0; i < a_.rows(); ++i) {
      const double t2 = sum + svd_.u(i, j) * r[i];
      if (std::abs(sum) >= std::abs(svd_.u(i, j) * r[i]))
        carry2 += (sum - t2) + svd_.u(i, j) * r[i];
      else
        carry2 += (svd_.u(i, j) * r[i] - t2) + sum;
      sum = t2;
    }
    coeff[j] = (sum + carry2) / svd_.sigma[j];
  }
  Vector out = x;
  for (std::size_t j = 0; j < k; ++j) {
    if (coeff[j] == 0.0) continue;
    for (std::size_t i = 0; i < a_.cols(); ++i) out[i] -= svd_.v(i, j) * coeff[j];
  }
  return out;
}

double AffineProjector::residual(const Vector& x) const { return norm(sub(matvec(a_, x), t_)); }

bool AffineProjector::consistent(double tol) const {
  // Project the zero vector; the resulting residual is the min-norm residual.
  Vector z(a_.cols(), 0.0);
  const Vector p = project(z);
  return residual(p) <= tol * (1.0 + norm(t_));
}

Vector project_affine(const Vector& x, const Matrix& a, const Vector& t) {
  AffineProjector proj(a, t);
  Vector out = proj.project(x);
  if (proj.residual(out) > 1e-9 * (1.0 + norm(t))) {
    throw InfeasibleError("project_affine: system A z = t is inconsistent");
  }
  return out;
}

}  // namespace growthrates
