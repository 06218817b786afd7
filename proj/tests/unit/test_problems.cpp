#include <doctest.h>

#include <cmath>

#include "growthrates/problems.hpp"
#include "helpers.hpp"

using namespace growthrates;
using test_helpers::random_matrix;
using test_helpers::random_rank_deficient;
using test_helpers::random_vector;

namespace {

StructuredProblem random_composition(std::size_t m, std::size_t n, std::uint64_t seed) {
  const Matrix a = random_matrix(m, n, seed);
  const Vector d = random_vector(m, seed + 1);
  // Full-row-rank A makes every d reachable: t* = d, f* = 0.
  return make_structured_problem(a, Vector(), InnerFunction::shifted_half_squared_norm(d),
                                 FeasibleSet::whole_space(n), OptimalSetInfo{d, std::nullopt}, 0.0);
}

}  // namespace

TEST_CASE("eval_grad on the plain half squared norm") {
  const auto p = make_structured_problem(Matrix::identity(2), Vector(),
                                         InnerFunction::shifted_half_squared_norm({0.0, 0.0}),
                                         FeasibleSet::whole_space(2));
  auto [value, grad] = eval_grad(p, {1.0, 2.0});
  CHECK(value == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(grad[0] == doctest::Approx(1.0));
  CHECK(grad[1] == doctest::Approx(2.0));
}

TEST_CASE("eval_grad vanishes on the optimal set") {
  const Matrix a = random_matrix(3, 5, 61);
  const Vector x_opt = random_vector(5, 62);
  const Vector d = matvec(a, x_opt);
  const auto p = make_structured_problem(a, Vector(), InnerFunction::shifted_half_squared_norm(d),
                                         FeasibleSet::whole_space(5));
  auto [value, grad] = eval_grad(p, x_opt);
  CHECK(std::abs(value) <= 1e-12);
  CHECK(norm(grad) <= 1e-10);
}

TEST_CASE("gradient matches central finite differences") {
  const Matrix a = random_matrix(4, 6, 71);
  const Vector d = random_vector(4, 72);
  Vector c = random_vector(6, 73);
  const auto p = make_structured_problem(a, c, InnerFunction::shifted_half_squared_norm(d),
                                         FeasibleSet::whole_space(6));
  const Vector x = random_vector(6, 74);
  auto [value, grad] = eval_grad(p, x);
  (void)value;
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (eval_value(p, xp) - eval_value(p, xm)) / (2.0 * h);
    CHECK(std::abs(grad[i] - fd) <= 1e-5);
  }
}

TEST_CASE("quadratic-form inner functions match their definition") {
  const Matrix h = Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  const auto g = InnerFunction::quadratic_form(h, {1.0, -1.0});
  CHECK(g.l_g == doctest::Approx(2.20710678).epsilon(1e-6));
  CHECK(g.sigma_g == doctest::Approx(0.79289322).epsilon(1e-6));
  const Vector z{1.0, 2.0};
  CHECK(g.value(z) == doctest::Approx(0.5 * (2.0 + 2.0 * 0.5 * 2.0 + 4.0) + 1.0 - 2.0));
  const Vector grad = g.gradient(z);
  CHECK(grad[0] == doctest::Approx(2.0 + 1.0 + 1.0));
  CHECK(grad[1] == doctest::Approx(0.5 + 2.0 - 1.0));
}

TEST_CASE("structured constants: identity composition has mu = 1") {
  const Vector d = random_vector(3, 81);
  const auto p = make_structured_problem(Matrix::identity(3), Vector(),
                                         InnerFunction::shifted_half_squared_norm(d),
                                         FeasibleSet::whole_space(3), OptimalSetInfo{d, {}}, 0.0);
  const auto c = structured_constants(p);
  CHECK(c.l_f == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.kappa_f == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.mu_f == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.class_tag == ClassTag::QuasiStrong);
}

TEST_CASE("structured constants: PSD system conditioning") {
  // Q = G^T G with G rank-deficient; mu must equal the eigenvalue ratio of Q.
  const Matrix g = random_rank_deficient(6, 6, 3, 91);
  Matrix q(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 6; ++k) s += g(k, i) * g(k, j);
      q(i, j) = s;
    }
  // Symmetrize exactly against round-off.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) q(j, i) = q(i, j);
  const Vector x_s = random_vector(6, 92);
  const Vector q_lin = scale(matvec(q, x_s), -1.0);
  const auto p = qp_problem(q, q_lin);
  const auto c = structured_constants(p);

  const Vector eig = singular_values(q);  // eigenvalues for PSD Q
  const double lam_max = eig.front();
  double lam_min_nonzero = lam_max;
  for (double e : eig) {
    if (e > 1e-10 * lam_max) lam_min_nonzero = e;
  }
  CHECK(c.l_f == doctest::Approx(lam_max).epsilon(1e-8));
  CHECK(c.mu_f == doctest::Approx(lam_min_nonzero / lam_max).epsilon(1e-7));
  CHECK(*p.f_star == doctest::Approx(0.0));
}

TEST_CASE("structured constants: least squares") {
  const Matrix a = random_rank_deficient(5, 8, 3, 101);
  const Vector b = random_vector(5, 102);
  const auto p = least_squares_problem(a, b);
  const auto c = structured_constants(p);
  const double smin = sigma_min_nonzero(a);
  const double smax = spectral_norm(a);
  CHECK(c.l_f == doctest::Approx(smax * smax).epsilon(1e-9));
  CHECK(c.kappa_f == doctest::Approx(smin * smin).epsilon(1e-9));
  CHECK(c.mu_f == doctest::Approx(smin * smin / (smax * smax)).epsilon(1e-9));
  CHECK(c.mu_f <= 1.0 + 1e-12);
}

TEST_CASE("least squares optimal set is consistent") {
  const Matrix a = random_rank_deficient(5, 8, 3, 111);
  const Vector b = random_vector(5, 112);
  const auto p = least_squares_problem(a, b);
  REQUIRE(p.optimal_set.has_value());
  const auto proj = OptimalSetProjector::build(p);
  REQUIRE(proj.has_value());
  const Vector x_bar = proj->project(random_vector(8, 113));
  // Feasibility and stationarity of the gradient mapping at the projection.
  CHECK(norm(sub(matvec(p.a, x_bar), p.optimal_set->t_star)) <= 1e-8);
  auto [value, grad] = eval_grad(p, x_bar);
  CHECK(value == doctest::Approx(*p.f_star).epsilon(1e-9));
  CHECK(norm(grad) <= 1e-7);
}

TEST_CASE("qp rejects inconsistent right-hand sides") {
  // Rank-1 Q, q outside its range.
  const Matrix q = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(qp_problem(q, {0.0, 1.0}), InfeasibleError);
}

TEST_CASE("hoffman theta on equality-only sets") {
  CHECK(hoffman_theta(Matrix::identity(3)) == doctest::Approx(1.0));
  Matrix twice = Matrix::identity(3);
  for (auto& v : twice.data()) v *= 2.0;
  CHECK(hoffman_theta(twice) == doctest::Approx(0.5));
}

TEST_CASE("hoffman theta enforces the row cap") {
  Matrix c(kMaxHoffmanRows + 1, 2);
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, 0) = 1.0;
  CHECK_THROWS_AS(hoffman_theta(Matrix::identity(2), &c), ScaleLimitError);
}

TEST_CASE("hoffman inequality holds at the enumerated constant (Monte Carlo)") {
  const Matrix a = random_rank_deficient(4, 6, 3, 121);
  const Matrix c = random_matrix(3, 6, 122);
  // Nonempty polyhedron by construction: pass through z0 with slack.
  const Vector z0 = random_vector(6, 123);
  const Vector b = matvec(a, z0);
  Vector d = matvec(c, z0);
  for (auto& v : d) v += 0.5;

  const double theta = hoffman_theta(a, &c);
  const PolyhedralProjector poly(c, d, a, b);
  Rng rng(124);
  for (int i = 0; i < 10000; ++i) {
    const Vector x = scale(rng.normal_vector(6), 2.0);
    const Vector x_bar = poly.project(x);
    const double dist = norm(sub(x, x_bar));
    // Residual norm ||(Ax - b, [Cx - d]_+)||.
    Vector residual = sub(matvec(a, x), b);
    const Vector cx = matvec(c, x);
    for (std::size_t r = 0; r < cx.size(); ++r) residual.push_back(std::max(0.0, cx[r] - d[r]));
    CHECK(dist <= theta * norm(residual) * (1.0 + 1e-8) + 1e-9);
  }
}

TEST_CASE("lp embedding block layout (1x1)") {
  const Matrix e = Matrix::from_rows({{1.0}});
  const auto p = build_lp_embedding(e, {1.0}, {1.0});
  REQUIRE(p.a.rows() == 3);
  REQUIRE(p.a.cols() == 3);
  const Matrix expected = Matrix::from_rows({{0, 1, 1}, {1, 0, 0}, {1, -1, 0}});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(p.a(i, j) == expected(i, j));
  CHECK(p.g.target == Vector{1.0, 1.0, 0.0});
  CHECK(*p.f_star == 0.0);
}

TEST_CASE("lp embedding dimension is 2N + m") {
  const LpData lp = gen_random_lp(100, 150, 1.0, 1);
  const auto p = build_lp_embedding(lp.e, lp.b, lp.c);
  CHECK(p.dim() == 400);
}

TEST_CASE("generated lp: complementarity, zero gap, embedded residual") {
  for (std::uint64_t seed : {1, 5, 9}) {
    const LpData lp = gen_random_lp(7, 11, 1.0, seed);
    for (std::size_t i = 0; i < 11; ++i) {
      CHECK(lp.u_star[i] * lp.s_star[i] == 0.0);
      CHECK(lp.u_star[i] >= 0.0);
      CHECK(lp.s_star[i] >= 0.0);
    }
    const double gap = cdot(lp.c, lp.u_star) - cdot(lp.b, lp.v_star);
    CHECK(std::abs(gap) <= 1e-10 * (1.0 + std::abs(cdot(lp.c, lp.u_star))));

    const auto p = build_lp_embedding(lp.e, lp.b, lp.c);
    CHECK(embedding_residual(p, embed_solution(lp)) <= 1e-10);
  }
}

TEST_CASE("generated lp honors the sparsity pattern deterministically") {
  const LpData sparse = gen_random_lp(900, 1000, 0.05, 3);
  std::size_t nonzeros = 0;
  for (double v : sparse.e.data()) nonzeros += v != 0.0;
  CHECK(nonzeros == doctest::Approx(0.05 * 900 * 1000).epsilon(0.01));

  const LpData again = gen_random_lp(900, 1000, 0.05, 3);
  CHECK(sparse.e.data() == again.e.data());
  CHECK(sparse.b == again.b);
  CHECK(sparse.c == again.c);
}

TEST_CASE("gen_random_lp validates dimensions") {
  CHECK_THROWS_AS(gen_random_lp(10, 10, 1.0, 1), DimensionError);
  CHECK_THROWS_AS(gen_random_lp(5, 10, 0.0, 1), Error);
}

TEST_CASE("gradient Lipschitz bound and descent lemma on random pairs") {
  const auto p = random_composition(5, 9, 131);
  Rng rng(132);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = rng.normal_vector(9);
    const Vector y = rng.normal_vector(9);
    auto [fx, gx] = eval_grad(p, x);
    auto [fy, gy] = eval_grad(p, y);
    const double dist = norm(sub(x, y));
    CHECK(norm(sub(gx, gy)) <= p.l_f * dist * (1.0 + 1e-10) + 1e-12);
    // Descent lemma.
    CHECK(fy <= fx + cdot(gx, sub(y, x)) + 0.5 * p.l_f * dist * dist + 1e-9);
    // Convexity and co-coercivity bracket.
    const double inner = cdot(sub(gx, gy), sub(x, y));
    CHECK(inner >= -1e-10);
    CHECK(inner <= p.l_f * dist * dist * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("structured constants require a sublevel bound with a linear term on a cone") {
  const Matrix a = Matrix::from_rows({{1.0, 0.0}});
  const auto p = make_structured_problem(a, {0.0, 1.0},
                                         InnerFunction::shifted_half_squared_norm({0.0}),
                                         FeasibleSet::nonneg_orthant(2),
                                         OptimalSetInfo{{0.0}, 0.0}, 0.0);
  CHECK_THROWS_AS(structured_constants(p), Error);
  const auto c = structured_constants(p, 4.0);
  CHECK(c.class_tag == ClassTag::FuncGrowth);
  // theta([A; c^T], C) = 1 here and grad g(t*) = 0, so kappa = 1/(1 + M).
  CHECK(c.kappa_f == doctest::Approx(1.0 / 5.0).epsilon(1e-9));
}

TEST_CASE("structured constants over an explicit polyhedral set") {
  // f = 1/2 (x1 + x2 - 1)^2 over the triangle {x >= 0, x1 + x2 <= 2}: the
  // optimal set is the segment {x >= 0, x1 + x2 = 1}.
  const Matrix a = Matrix::from_rows({{1.0, 1.0}});
  const Matrix c = Matrix::from_rows({{-1, 0}, {0, -1}, {1, 1}});
  const Vector d{0.0, 0.0, 2.0};
  const auto set = FeasibleSet::polyhedron(c, d, Matrix(), Vector());
  const auto p = make_structured_problem(a, Vector(),
                                         InnerFunction::shifted_half_squared_norm({1.0}), set,
                                         OptimalSetInfo{{1.0}, {}}, 0.0);
  const auto constants = structured_constants(p);
  CHECK(constants.class_tag == ClassTag::QuasiStrong);
  CHECK(constants.l_f == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(constants.kappa_f > 0.0);

  const auto proj = OptimalSetProjector::build(p);
  REQUIRE(proj.has_value());
  // Projection of a feasible point onto the optimal segment.
  const Vector x_bar = proj->project({1.5, 0.25});
  CHECK(x_bar[0] + x_bar[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(x_bar[0] >= -1e-12);
  CHECK(eval_value(p, x_bar) == doctest::Approx(0.0).epsilon(1e-12));
}
