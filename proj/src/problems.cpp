#include "growthrates/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "growthrates/rng.hpp"

namespace growthrates {

InnerFunction InnerFunction::shifted_half_squared_norm(Vector d) {
  InnerFunction g;
  g.kind = Kind::ShiftedHalfSquaredNorm;
  g.target = std::move(d);
  g.sigma_g = 1.0;
  g.l_g = 1.0;
  return g;
}

InnerFunction InnerFunction::quadratic_form(Matrix h, Vector lin) {
  if (h.rows() != h.cols()) throw DimensionError("quadratic form: H must be square");
  if (lin.size() != h.rows()) throw DimensionError("quadratic form: h length mismatch");
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i + 1; j < h.cols(); ++j)
      if (std::abs(h(i, j) - h(j, i)) > 1e-12 * (1.0 + std::abs(h(i, j))))
        throw Error("quadratic form: H not symmetric");
  InnerFunction g;
  g.kind = Kind::QuadraticForm;
  g.h = std::move(h);
  g.h_lin = std::move(lin);
  // For symmetric positive definite H the singular values are the
  // eigenvalues.
  const Vector s = singular_values(g.h);
  g.l_g = s.front();
  g.sigma_g = s.back();
  if (g.sigma_g <= 0.0) throw Error("quadratic form: H must be positive definite");
  return g;
}

double InnerFunction::value(const Vector& z) const {
  if (z.size() != dim()) throw DimensionError("inner function: dimension mismatch");
  if (kind == Kind::ShiftedHalfSquaredNorm) {
    return 0.5 * distance_sq(z, target);
  }
  return 0.5 * cdot(z, matvec(h, z)) + cdot(h_lin, z);
}

Vector InnerFunction::gradient(const Vector& z) const {
  if (z.size() != dim()) throw DimensionError("inner function: dimension mismatch");
  if (kind == Kind::ShiftedHalfSquaredNorm) return sub(z, target);
  return add(matvec(h, z), h_lin);
}

bool StructuredProblem::has_linear_term() const {
  return std::any_of(linear_term.begin(), linear_term.end(), [](double v) { return v != 0.0; });
}

StructuredProblem make_structured_problem(Matrix a, Vector c, InnerFunction g, FeasibleSet set,
                                          std::optional<OptimalSetInfo> optimal_set,
                                          std::optional<double> f_star) {
  const double sn = spectral_norm(a);
  StructuredProblem p;
  p.a = std::move(a);
  p.linear_term = std::move(c);
  p.g = std::move(g);
  p.set = std::move(set);
  if (p.a.empty()) throw DimensionError("structured problem: empty A");
  if (p.g.dim() != p.a.rows()) throw DimensionError("structured problem: g dimension != rows(A)");
  if (p.linear_term.empty()) p.linear_term.assign(p.a.cols(), 0.0);
  if (p.linear_term.size() != p.a.cols()) throw DimensionError("structured problem: c length mismatch");
  if (p.set.dim() != p.a.cols()) throw DimensionError("structured problem: set dimension mismatch");
  p.l_f = p.g.l_g * sn * sn;
  p.optimal_set = std::move(optimal_set);
  p.f_star = std::move(f_star);
  return p;
}

std::pair<double, Vector> eval_grad(const StructuredProblem& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("eval_grad: dimension mismatch");
  const Vector z = matvec(p.a, x);
  double value = p.g.value(z) + cdot(p.linear_term, x);
  Vector grad = matvec_transposed(p.a, p.g.gradient(z));
  axpy(1.0, p.linear_term, grad);
  return {value, std::move(grad)};
}

double eval_value(const StructuredProblem& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("eval_value: dimension mismatch");
  return p.g.value(matvec(p.a, x)) + cdot(p.linear_term, x);
}

namespace {

Matrix stack_extra_row(const Matrix& a, const Vector& row) {
  Matrix out(a.rows() + 1, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t j = 0; j < a.cols(); ++j) out(a.rows(), j) = row[j];
  return out;
}

}  // namespace

ProblemConstants structured_constants(const StructuredProblem& p,
                                      std::optional<double> sublevel_bound) {
  ProblemConstants out;
  out.l_f = p.l_f;

  const bool has_c = p.has_linear_term();
  const bool unconstrained = p.set.kind() == SetKind::WholeSpace;

  if (!has_c) {
    if (unconstrained) {
      out.hoffman_theta = hoffman_theta(p.a);
    } else {
      auto [c_ineq, d_ineq] = p.set.inequality_form();
      out.hoffman_theta = hoffman_theta(p.a, &c_ineq);
    }
    out.kappa_f = p.g.sigma_g / (out.hoffman_theta * out.hoffman_theta);
    out.class_tag = ClassTag::QuasiStrong;
  } else if (unconstrained) {
    out.hoffman_theta = hoffman_theta(p.a);
    out.kappa_f = p.g.sigma_g / (out.hoffman_theta * out.hoffman_theta);
    out.class_tag = ClassTag::GradGrowth;
  } else {
    if (!sublevel_bound) {
      throw Error("structured_constants: linear term over a constrained set needs a sublevel bound");
    }
    if (!p.optimal_set) {
      throw Error("structured_constants: linear term over a constrained set needs the optimal set");
    }
    // c enters the optimal-set description as one extra equality row.
    const Matrix stacked = stack_extra_row(p.a, p.linear_term);
    auto [c_ineq, d_ineq] = p.set.inequality_form();
    out.hoffman_theta = hoffman_theta(stacked, &c_ineq);
    const double c_g = norm(p.g.gradient(p.optimal_set->t_star));
    const double m_bound = *sublevel_bound;
    out.kappa_f = p.g.sigma_g / (out.hoffman_theta * out.hoffman_theta *
                                 (1.0 + m_bound * p.g.sigma_g + 2.0 * c_g * c_g));
    out.class_tag = ClassTag::FuncGrowth;
  }

  out.mu_f = out.kappa_f / out.l_f;
  return out;
}

double hoffman_theta(const Matrix& a, const Matrix* c) {
  if (a.empty()) throw DimensionError("hoffman_theta: empty matrix");
  if (c == nullptr || c->empty()) return 1.0 / sigma_min_nonzero(a);
  if (c->cols() != a.cols()) throw DimensionError("hoffman_theta: A/C column mismatch");
  const std::size_t m = c->rows();
  if (m > kMaxHoffmanRows) {
    throw ScaleLimitError("hoffman_theta: " + std::to_string(m) + " inequality rows exceed the cap of " +
                          std::to_string(kMaxHoffmanRows));
  }

  const std::size_t p_rank = numerical_rank(a);
  if (p_rank == 0) throw DegenerateMatrixError("hoffman_theta: A is zero");

  // r = rank of the full stack [A; C].
  Matrix full(a.rows() + m, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) full(i, j) = a(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) full(a.rows() + i, j) = (*c)(i, j);
  const std::size_t r = numerical_rank(full);
  const std::size_t card = r - p_rank;

  double theta = 0.0;
  bool any = false;
  std::vector<std::size_t> idx(card);
  // Enumerate subsets I of [m] with |I| = card via prev_permutation over a
  // selection mask.
  std::vector<bool> mask(m, false);
  for (std::size_t i = 0; i < card; ++i) mask[i] = true;
  while (true) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask[i]) idx[k++] = i;
    }
    Matrix stacked(a.rows() + card, a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) stacked(i, j) = a(i, j);
    for (std::size_t t = 0; t < card; ++t)
      for (std::size_t j = 0; j < a.cols(); ++j) stacked(a.rows() + t, j) = (*c)(idx[t], j);
    if (numerical_rank(stacked) == r) {
      any = true;
      theta = std::max(theta, 1.0 / sigma_min_nonzero(stacked));
    }
    if (!std::prev_permutation(mask.begin(), mask.end())) break;
  }
  if (!any) throw Error("hoffman_theta: no admissible index set found");
  return theta;
}

LpData gen_random_lp(std::size_t m, std::size_t n_cols, double density, std::uint64_t seed) {
  if (m == 0 || n_cols == 0 || m >= n_cols) throw DimensionError("gen_random_lp: need 0 < m < N");
  if (!(density > 0.0 && density <= 1.0)) throw Error("gen_random_lp: density must be in (0, 1]");

  Rng root(seed);
  Rng support_rng = root.substream(1);
  Rng value_rng = root.substream(2);
  Rng dual_rng = root.substream(3);
  Rng matrix_rng = root.substream(4);
  Rng pattern_rng = root.substream(5);

  LpData lp;
  lp.seed = seed;
  lp.density = density;
  lp.u_star.assign(n_cols, 0.0);
  lp.s_star.assign(n_cols, 0.0);
  // Complementary supports guarantee u*_i s*_i = 0 and a zero duality gap.
  for (std::size_t i = 0; i < n_cols; ++i) {
    const bool primal_side = support_rng.next_double() < 0.5;
    const double v = std::abs(value_rng.normal());
    if (primal_side) {
      lp.u_star[i] = v;
    } else {
      lp.s_star[i] = v;
    }
  }
  lp.v_star = dual_rng.normal_vector(m);

  lp.e = Matrix(m, n_cols);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n_cols; ++j) lp.e(i, j) = matrix_rng.normal();

  if (density < 1.0) {
    // Keep exactly round(density * m * N) entries: those whose uniform score
    // falls below the density quantile of the score field.
    const std::size_t total = m * n_cols;
    Vector scores(total);
    for (auto& s : scores) s = pattern_rng.next_double();
    const std::size_t keep =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(density * static_cast<double>(total))));
    Vector sorted = scores;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(keep - 1), sorted.end());
    const double threshold = sorted[keep - 1];
    for (std::size_t t = 0; t < total; ++t) {
      if (scores[t] > threshold) lp.e.data()[t] = 0.0;
    }
  }

  lp.b = matvec(lp.e, lp.u_star);
  lp.c = matvec_transposed(lp.e, lp.v_star);
  axpy(1.0, lp.s_star, lp.c);
  return lp;
}

StructuredProblem build_lp_embedding(const Matrix& e, const Vector& b, const Vector& c,
                                     bool known_solvable) {
  if (e.empty()) throw DimensionError("lp embedding: empty E");
  const std::size_t m = e.rows();
  const std::size_t big_n = e.cols();
  if (b.size() != m) throw DimensionError("lp embedding: b length mismatch");
  if (c.size() != big_n) throw DimensionError("lp embedding: c length mismatch");

  const std::size_t n = 2 * big_n + m;
  Matrix a(big_n + m + 1, n);
  Vector d(big_n + m + 1, 0.0);
  // Block rows: [0 E^T I; E 0 0; c^T -b^T 0], rhs (c, b, 0).
  for (std::size_t i = 0; i < big_n; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, big_n + j) = e(j, i);
    a(i, big_n + m + i) = 1.0;
    d[i] = c[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < big_n; ++j) a(big_n + i, j) = e(i, j);
    d[big_n + i] = b[i];
  }
  for (std::size_t j = 0; j < big_n; ++j) a(big_n + m, j) = c[j];
  for (std::size_t j = 0; j < m; ++j) a(big_n + m, big_n + j) = -b[j];

  FeasibleSet cone = FeasibleSet::product_cone({{ConeSegment::Kind::NonnegOrthant, big_n},
                                                {ConeSegment::Kind::Free, m},
                                                {ConeSegment::Kind::NonnegOrthant, big_n}});
  std::optional<OptimalSetInfo> opt;
  std::optional<double> f_star;
  if (known_solvable) {
    opt = OptimalSetInfo{d, std::nullopt};
    f_star = 0.0;
  }
  return make_structured_problem(std::move(a), Vector(),
                                 InnerFunction::shifted_half_squared_norm(d), std::move(cone),
                                 std::move(opt), f_star);
}

Vector embed_solution(const LpData& lp) {
  Vector x;
  x.reserve(2 * lp.u_star.size() + lp.v_star.size());
  x.insert(x.end(), lp.u_star.begin(), lp.u_star.end());
  x.insert(x.end(), lp.v_star.begin(), lp.v_star.end());
  x.insert(x.end(), lp.s_star.begin(), lp.s_star.end());
  return x;
}

double embedding_residual(const StructuredProblem& p, const Vector& x) {
  if (p.g.kind != InnerFunction::Kind::ShiftedHalfSquaredNorm) {
    throw Error("embedding_residual: objective is not 1/2 ||Ax - d||^2");
  }
  return norm(sub(matvec(p.a, x), p.g.target));
}

StructuredProblem least_squares_problem(Matrix a, Vector b) {
  if (a.empty()) throw DimensionError("least squares: empty A");
  if (b.size() != a.rows()) throw DimensionError("least squares: b length mismatch");
  // 1/2 ||A x + b||^2 = g(A x) with g(z) = 1/2 ||z - (-b)||^2.
  Vector target = scale(b, -1.0);
  // t* is the projection of the target onto range(A).
  const SvdResult s = svd(a);
  Vector t_star(a.rows(), 0.0);
  const double smax = s.sigma.front();
  for (std::size_t j = 0; j < s.sigma.size(); ++j) {
    if (s.sigma[j] <= kRankTolerance * smax) continue;
    Vector col(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) col[i] = s.u(i, j);
    axpy(cdot(col, target), col, t_star);
  }
  const double f_star = 0.5 * distance_sq(t_star, target);
  const std::size_t n = a.cols();
  return make_structured_problem(std::move(a), Vector(),
                                 InnerFunction::shifted_half_squared_norm(std::move(target)),
                                 FeasibleSet::whole_space(n), OptimalSetInfo{t_star, std::nullopt},
                                 f_star);
}

StructuredProblem qp_problem(const Matrix& q, const Vector& q_lin) {
  if (q.rows() != q.cols()) throw DimensionError("qp: Q must be square");
  if (q_lin.size() != q.rows()) throw DimensionError("qp: q length mismatch");
  const std::size_t n = q.rows();
  const SvdResult s = svd(q);
  const double smax = s.sigma.front();
  if (smax == 0.0) throw DegenerateMatrixError("qp: Q is zero");
  std::size_t rank = 0;
  for (double sv : s.sigma) {
    if (sv > kRankTolerance * smax) ++rank;
  }
  // Q = L^T L with L = sqrt(Sigma_r) V_r^T; null(L) = null(Q).
  Matrix l(rank, n);
  for (std::size_t i = 0; i < rank; ++i) {
    const double root = std::sqrt(s.sigma[i]);
    for (std::size_t j = 0; j < n; ++j) l(i, j) = root * s.v(j, i);
  }
  // Particular solution of Q x = -q via the pseudo-inverse; the system must
  // be consistent.
  Vector x_s(n, 0.0);
  for (std::size_t j = 0; j < rank; ++j) {
    Vector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = s.u(i, j);
    const double coeff = -cdot(col, q_lin) / s.sigma[j];
    for (std::size_t i = 0; i < n; ++i) x_s[i] += coeff * s.v(i, j);
  }
  Vector check = add(matvec(q, x_s), q_lin);
  if (norm(check) > 1e-8 * (1.0 + norm(q_lin))) {
    throw InfeasibleError("qp: q is not in the range of Q (no solution)");
  }
  Vector target = matvec(l, x_s);
  return make_structured_problem(std::move(l), Vector(),
                                 InnerFunction::shifted_half_squared_norm(target),
                                 FeasibleSet::whole_space(n), OptimalSetInfo{target, std::nullopt},
                                 0.0);
}

std::optional<OptimalSetProjector> OptimalSetProjector::build(const StructuredProblem& p) {
  if (!p.optimal_set) return std::nullopt;
  const auto& info = *p.optimal_set;
  Matrix eq = p.a;
  Vector rhs = info.t_star;
  if (info.s_star) {
    eq = stack_extra_row(p.a, p.linear_term);
    rhs.push_back(*info.s_star);
  }

  OptimalSetProjector proj;
  if (p.set.kind() == SetKind::WholeSpace) {
    proj.affine_.emplace(std::move(eq), std::move(rhs));
    return proj;
  }

  Matrix c_ineq;
  Vector d_ineq;
  if (p.set.kind() == SetKind::Polyhedron) {
    // Keep the set's own equalities as equalities next to A x = t*.
    const auto& data = p.set.polyhedron_data();
    c_ineq = data.ineq_matrix();
    d_ineq = data.ineq_rhs();
    if (!data.eq_matrix().empty()) {
      const Matrix& set_eq = data.eq_matrix();
      Matrix stacked(eq.rows() + set_eq.rows(), eq.cols());
      for (std::size_t i = 0; i < eq.rows(); ++i)
        for (std::size_t j = 0; j < eq.cols(); ++j) stacked(i, j) = eq(i, j);
      for (std::size_t i = 0; i < set_eq.rows(); ++i)
        for (std::size_t j = 0; j < eq.cols(); ++j) stacked(eq.rows() + i, j) = set_eq(i, j);
      eq = std::move(stacked);
      rhs.insert(rhs.end(), data.eq_rhs().begin(), data.eq_rhs().end());
    }
  } else {
    std::tie(c_ineq, d_ineq) = p.set.inequality_form();
  }
  if (!c_ineq.empty() && c_ineq.rows() > kMaxPolyhedronRows) return std::nullopt;
  try {
    proj.poly_ = std::make_shared<PolyhedralProjector>(std::move(c_ineq), std::move(d_ineq),
                                                       std::move(eq), std::move(rhs));
  } catch (const ScaleLimitError&) {
    return std::nullopt;
  }
  return proj;
}

Vector OptimalSetProjector::project(const Vector& x) const {
  if (affine_) return affine_->project(x);
  return poly_->project(x);
}

double OptimalSetProjector::distance_sq(const Vector& x) const {
  return growthrates::distance_sq(x, project(x));
}

}  // namespace growthrates
