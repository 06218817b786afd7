#include "growthrates/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace growthrates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PolyhedralProjector::PolyhedralProjector(Matrix c, Vector d, Matrix a_eq, Vector b_eq)
    : c_(std::move(c)), d_(std::move(d)), a_eq_(std::move(a_eq)), b_eq_(std::move(b_eq)) {
  if (!c_.empty() && c_.rows() != d_.size()) throw DimensionError("polyhedron: C/d mismatch");
  if (!a_eq_.empty() && a_eq_.rows() != b_eq_.size()) throw DimensionError("polyhedron: A_eq/b_eq mismatch");
  if (!c_.empty() && !a_eq_.empty() && c_.cols() != a_eq_.cols())
    throw DimensionError("polyhedron: C/A_eq column mismatch");
  dim_ = c_.empty() ? a_eq_.cols() : c_.cols();
  if (dim_ == 0) throw DimensionError("polyhedron: no constraints given");

  const std::size_t m = c_.empty() ? 0 : c_.rows();
  if (m > kMaxPolyhedronRows) {
    throw ScaleLimitError("polyhedron: " + std::to_string(m) + " inequality rows exceed the cap of " +
                          std::to_string(kMaxPolyhedronRows));
  }

  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Candidate cand;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::size_t{1} << i)) cand.active.push_back(i);
    }
    const std::size_t extra = cand.active.size();
    const std::size_t eq_rows = a_eq_.empty() ? 0 : a_eq_.rows();
    if (eq_rows + extra == 0) {
      candidates_.push_back(std::move(cand));
      continue;
    }
    Matrix stacked(eq_rows + extra, dim_);
    Vector rhs(eq_rows + extra);
    for (std::size_t i = 0; i < eq_rows; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) stacked(i, j) = a_eq_(i, j);
      rhs[i] = b_eq_[i];
    }
    for (std::size_t k = 0; k < extra; ++k) {
      const std::size_t r = cand.active[k];
      for (std::size_t j = 0; j < dim_; ++j) stacked(eq_rows + k, j) = c_(r, j);
      rhs[eq_rows + k] = d_[r];
    }
    cand.projector.emplace(std::move(stacked), std::move(rhs));
    candidates_.push_back(std::move(cand));
  }
}

bool PolyhedralProjector::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) throw DimensionError("polyhedron: point dimension mismatch");
  for (std::size_t i = 0; !c_.empty() && i < c_.rows(); ++i) {
    if (cdot(c_.row(i), x) > d_[i] + tol * (1.0 + std::abs(d_[i]))) return false;
  }
  if (!a_eq_.empty()) {
    for (std::size_t i = 0; i < a_eq_.rows(); ++i) {
      const double r = cdot(a_eq_.row(i), x) - b_eq_[i];
      if (std::abs(r) > tol * (1.0 + std::abs(b_eq_[i]))) return false;
    }
  }
  return true;
}

Vector PolyhedralProjector::project(const Vector& x) const {
  if (x.size() != dim_) throw DimensionError("polyhedron: point dimension mismatch");

  bool found = false;
  Vector best_point;
  double best_dist = kInf;
  const std::vector<std::size_t>* best_active = nullptr;

  for (const auto& cand : candidates_) {
    Vector z = cand.projector ? cand.projector->project(x) : x;
    // A candidate from an infeasible or inconsistent subsystem simply fails
    // the membership test below; any feasible candidate is at least as far
    // as the true projection, so the minimum over feasible ones is exact.
    if (!contains(z, 1e-9)) continue;
    const double dist = distance_sq(x, z);
    bool take;
    if (!found || dist < best_dist - 1e-12 * (1.0 + best_dist)) {
      take = true;
    } else if (dist <= best_dist + 1e-12 * (1.0 + best_dist)) {
      // Ties resolved by lexicographically smallest active set for
      // determinism across runs.
      take = std::lexicographical_compare(cand.active.begin(), cand.active.end(),
                                          best_active->begin(), best_active->end());
    } else {
      take = false;
    }
    if (take) {
      best_point = std::move(z);
      best_dist = dist;
      best_active = &cand.active;
      found = true;
    }
  }

  if (!found) throw InfeasibleError("polyhedron: empty feasible set");
  verify_kkt(x, best_point, 1e-8);
  return best_point;
}

void PolyhedralProjector::verify_kkt(const Vector& x, const Vector& z, double tol) const {
  // Stationarity: x - z must lie in the span of the equality normals and the
  // active inequality normals.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; !c_.empty() && i < c_.rows(); ++i) {
    if (std::abs(cdot(c_.row(i), z) - d_[i]) <= 1e-8 * (1.0 + std::abs(d_[i]))) active.push_back(i);
  }
  const std::size_t eq_rows = a_eq_.empty() ? 0 : a_eq_.rows();
  Vector gap = sub(x, z);
  const double gap_norm = norm(gap);
  if (gap_norm <= tol) return;
  if (eq_rows + active.size() == 0) {
    if (gap_norm > tol * (1.0 + norm(x))) throw Error("polyhedron: KKT residual check failed");
    return;
  }
  Matrix normals(eq_rows + active.size(), dim_);
  for (std::size_t i = 0; i < eq_rows; ++i)
    for (std::size_t j = 0; j < dim_; ++j) normals(i, j) = a_eq_(i, j);
  for (std::size_t k = 0; k < active.size(); ++k)
    for (std::size_t j = 0; j < dim_; ++j) normals(eq_rows + k, j) = c_(active[k], j);
  // Least-squares multiplier fit: residual of gap against span(normals^T).
  const Matrix nt = normals.transposed();
  const SvdResult s = svd(nt);
  Vector residual = gap;
  const double smax = s.sigma.front();
  for (std::size_t j = 0; j < s.sigma.size(); ++j) {
    if (s.sigma[j] <= kRankTolerance * smax) continue;
    Vector col(dim_);
    for (std::size_t i = 0; i < dim_; ++i) col[i] = s.u(i, j);
    const double coeff = cdot(col, gap);
    axpy(-coeff, col, residual);
  }
  if (norm(residual) > tol * (1.0 + gap_norm)) {
    throw Error("polyhedron: KKT residual check failed");
  }
}

Vector project_polyhedron(const Matrix& c, const Vector& d, const Matrix& a_eq,
                          const Vector& b_eq, const Vector& x) {
  PolyhedralProjector proj(c, d, a_eq, b_eq);
  return proj.project(x);
}

FeasibleSet FeasibleSet::whole_space(std::size_t dim) {
  FeasibleSet s;
  s.kind_ = SetKind::WholeSpace;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::nonneg_orthant(std::size_t dim) {
  FeasibleSet s;
  s.kind_ = SetKind::NonnegOrthant;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw DimensionError("box: bound length mismatch");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw Error("box: lower > upper at coordinate " + std::to_string(i));
  }
  FeasibleSet s;
  s.kind_ = SetKind::Box;
  s.dim_ = lower.size();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

FeasibleSet FeasibleSet::polyhedron(Matrix c, Vector d, Matrix a_eq, Vector b_eq) {
  FeasibleSet s;
  s.kind_ = SetKind::Polyhedron;
  s.poly_ = std::make_shared<PolyhedralProjector>(std::move(c), std::move(d), std::move(a_eq),
                                                  std::move(b_eq));
  s.dim_ = s.poly_->dim();
  return s;
}

FeasibleSet FeasibleSet::product_cone(std::vector<ConeSegment> segments) {
  FeasibleSet s;
  s.kind_ = SetKind::ProductCone;
  s.segments_ = std::move(segments);
  s.dim_ = 0;
  for (const auto& seg : s.segments_) s.dim_ += seg.len;
  if (s.dim_ == 0) throw DimensionError("product cone: empty");
  return s;
}

Vector FeasibleSet::project(const Vector& x) const {
  if (x.size() != dim_) throw DimensionError("feasible set: point dimension mismatch");
  switch (kind_) {
    case SetKind::WholeSpace:
      return x;
    case SetKind::NonnegOrthant: {
      Vector y = x;
      for (auto& v : y) v = std::max(v, 0.0);
      return y;
    }
    case SetKind::Box: {
      Vector y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], lower_[i], upper_[i]);
      return y;
    }
    case SetKind::ProductCone: {
      Vector y = x;
      std::size_t offset = 0;
      for (const auto& seg : segments_) {
        if (seg.kind == ConeSegment::Kind::NonnegOrthant) {
          for (std::size_t i = 0; i < seg.len; ++i) y[offset + i] = std::max(y[offset + i], 0.0);
        }
        offset += seg.len;
      }
      return y;
    }
    case SetKind::Polyhedron:
      return poly_->project(x);
  }
  throw Error("feasible set: unknown kind");
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_) throw DimensionError("feasible set: point dimension mismatch");
  switch (kind_) {
    case SetKind::WholeSpace:
      return true;
    case SetKind::NonnegOrthant:
      return std::all_of(x.begin(), x.end(), [&](double v) { return v >= -tol; });
    case SetKind::Box: {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
      }
      return true;
    }
    case SetKind::ProductCone: {
      std::size_t offset = 0;
      for (const auto& seg : segments_) {
        if (seg.kind == ConeSegment::Kind::NonnegOrthant) {
          for (std::size_t i = 0; i < seg.len; ++i) {
            if (x[offset + i] < -tol) return false;
          }
        }
        offset += seg.len;
      }
      return true;
    }
    case SetKind::Polyhedron:
      return poly_->contains(x, tol);
  }
  throw Error("feasible set: unknown kind");
}

std::pair<Matrix, Vector> FeasibleSet::inequality_form() const {
  switch (kind_) {
    case SetKind::WholeSpace:
      return {Matrix(), Vector()};
    case SetKind::NonnegOrthant: {
      Matrix c(dim_, dim_);
      for (std::size_t i = 0; i < dim_; ++i) c(i, i) = -1.0;
      return {c, Vector(dim_, 0.0)};
    }
    case SetKind::Box: {
      Matrix c(2 * dim_, dim_);
      Vector d(2 * dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        c(i, i) = 1.0;
        d[i] = upper_[i];
        c(dim_ + i, i) = -1.0;
        d[dim_ + i] = -lower_[i];
      }
      return {c, d};
    }
    case SetKind::ProductCone: {
      std::size_t rows = 0;
      for (const auto& seg : segments_) {
        if (seg.kind == ConeSegment::Kind::NonnegOrthant) rows += seg.len;
      }
      Matrix c(rows, dim_);
      std::size_t row = 0, offset = 0;
      for (const auto& seg : segments_) {
        if (seg.kind == ConeSegment::Kind::NonnegOrthant) {
          for (std::size_t i = 0; i < seg.len; ++i) c(row++, offset + i) = -1.0;
        }
        offset += seg.len;
      }
      return {c, Vector(rows, 0.0)};
    }
    case SetKind::Polyhedron: {
      const Matrix& c = poly_->ineq_matrix();
      const Matrix& a_eq = poly_->eq_matrix();
      const std::size_t ineq_rows = c.empty() ? 0 : c.rows();
      const std::size_t eq_rows = a_eq.empty() ? 0 : a_eq.rows();
      Matrix out(ineq_rows + 2 * eq_rows, dim_);
      Vector rhs(ineq_rows + 2 * eq_rows);
      for (std::size_t i = 0; i < ineq_rows; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out(i, j) = c(i, j);
        rhs[i] = poly_->ineq_rhs()[i];
      }
      for (std::size_t i = 0; i < eq_rows; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
          out(ineq_rows + 2 * i, j) = a_eq(i, j);
          out(ineq_rows + 2 * i + 1, j) = -a_eq(i, j);
        }
        rhs[ineq_rows + 2 * i] = poly_->eq_rhs()[i];
        rhs[ineq_rows + 2 * i + 1] = -poly_->eq_rhs()[i];
      }
      return {out, rhs};
    }
  }
  throw Error("feasible set: unknown kind");
}

const PolyhedralProjector& FeasibleSet::polyhedron_data() const {
  if (kind_ != SetKind::Polyhedron) throw Error("polyhedron_data: set is not a polyhedron");
  return *poly_;
}

std::pair<Vector, Vector> FeasibleSet::coordinate_bounds() const {
  Vector lo(dim_, -kInf), hi(dim_, kInf);
  switch (kind_) {
    case SetKind::WholeSpace:
      break;
    case SetKind::NonnegOrthant:
      std::fill(lo.begin(), lo.end(), 0.0);
      break;
    case SetKind::Box:
      lo = lower_;
      hi = upper_;
      break;
    case SetKind::ProductCone: {
      std::size_t offset = 0;
      for (const auto& seg : segments_) {
        if (seg.kind == ConeSegment::Kind::NonnegOrthant) {
          for (std::size_t i = 0; i < seg.len; ++i) lo[offset + i] = 0.0;
        }
        offset += seg.len;
      }
      break;
    }
    case SetKind::Polyhedron:
      throw Error("coordinate_bounds: polyhedron is not separable");
  }
  return {lo, hi};
}

}  // namespace growthrates
