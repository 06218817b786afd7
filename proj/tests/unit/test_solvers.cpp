#include <doctest.h>

#include <cmath>
#include <limits>

#include "growthrates/classes.hpp"
#include "growthrates/solvers.hpp"
#include "helpers.hpp"

#include <sstream>

using namespace growthrates;
using test_helpers::random_matrix;
using test_helpers::random_rank_deficient;
using test_helpers::random_vector;

namespace {

StructuredProblem one_dim_half_square() {
  return make_structured_problem(Matrix::identity(1), Vector(),
                                 InnerFunction::shifted_half_squared_norm({0.0}),
                                 FeasibleSet::whole_space(1), OptimalSetInfo{{0.0}, {}}, 0.0);
}

StructuredProblem rank_deficient_ls(std::uint64_t seed, std::size_t m = 5, std::size_t n = 8,
                                    std::size_t rank = 3) {
  const Matrix a = random_rank_deficient(m, n, rank, seed);
  const Vector z = random_vector(n, seed + 1);
  const Vector d = matvec(a, z);
  return make_structured_problem(a, Vector(), InnerFunction::shifted_half_squared_norm(d),
                                 FeasibleSet::whole_space(n), OptimalSetInfo{d, {}}, 0.0);
}

}  // namespace

TEST_CASE("gm_step solves the one-dimensional problem in one step") {
  const auto p = one_dim_half_square();
  const Vector next = gm_step(p, {1.0}, 1.0);
  CHECK(next[0] == doctest::Approx(0.0));
}

TEST_CASE("gm_step fixes optimal points") {
  const auto p = rank_deficient_ls(301);
  const auto projector = OptimalSetProjector::build(p);
  REQUIRE(projector.has_value());
  const Vector x_star = projector->project(random_vector(8, 302));
  const Vector next = gm_step(p, x_star, 1.0 / p.l_f);
  for (std::size_t i = 0; i < next.size(); ++i)
    CHECK(next[i] == doctest::Approx(x_star[i]).epsilon(1e-10));
}

TEST_CASE("gm_step satisfies the sufficient-decrease bound on random starts") {
  const auto p = rank_deficient_ls(303);
  Rng rng(304);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = rng.normal_vector(8);
    const Vector next = gm_step(p, x, 1.0 / p.l_f);
    const double fx = eval_value(p, x);
    const double fn = eval_value(p, next);
    CHECK(fn <= fx - 0.5 * p.l_f * distance_sq(next, x) + 1e-9 * (1.0 + std::abs(fx)));
  }
}

TEST_CASE("gm_step validates the step size") {
  const auto p = one_dim_half_square();
  CHECK_THROWS_AS(gm_step(p, {1.0}, 2.0), Error);
}

TEST_CASE("run_gm on an identity quadratic converges in one iteration") {
  const Vector d = random_vector(4, 311);
  const auto p = make_structured_problem(Matrix::identity(4), Vector(),
                                         InnerFunction::shifted_half_squared_norm(d),
                                         FeasibleSet::whole_space(4), OptimalSetInfo{d, {}}, 0.0);
  SolverConfig cfg;
  cfg.max_iters = 3;
  const Trace t = run_gm(p, random_vector(4, 312), cfg);
  REQUIRE(t.records.size() >= 2);
  CHECK(*t.records[1].dist_sq <= 1e-20);
}

TEST_CASE("run_gm per-step distance contraction on a rank-deficient instance") {
  const auto p = rank_deficient_ls(3, 10, 20, 10);
  const auto constants = structured_constants(p);
  const double ratio_bound = (1.0 - constants.mu_f) / (1.0 + constants.mu_f);
  SolverConfig cfg;
  cfg.max_iters = 200;
  const Trace t = run_gm(p, random_vector(20, 313), cfg);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double prev = *t.records[i - 1].dist_sq;
    const double cur = *t.records[i].dist_sq;
    if (prev <= 1e-22) break;
    CHECK(cur / prev <= ratio_bound + 1e-10);
  }
}

TEST_CASE("run_gm function-value bound") {
  const auto p = rank_deficient_ls(321, 6, 12, 4);
  const auto constants = structured_constants(p);
  const double mu = constants.mu_f;
  SolverConfig cfg;
  cfg.max_iters = 150;
  const Vector x0 = random_vector(12, 3220);
  const Trace t = run_gm(p, x0, cfg);
  const double d0 = *t.records[0].dist_sq;
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double k = static_cast<double>(t.records[i].k);
    const double denom = std::expm1(-k * std::log1p(-mu));
    const double bound = 0.5 * p.l_f * d0 * mu / denom;
    CHECK(*t.records[i].f_gap <= bound * (1.0 + 1e-9) + 1e-15);
  }
}

TEST_CASE("run_gm produces monotone function values") {
  const auto p = rank_deficient_ls(331, 7, 9, 5);
  SolverConfig cfg;
  cfg.max_iters = 100;
  const Trace t = run_gm(p, random_vector(9, 3320), cfg);
  CHECK(t.status != TerminalStatus::DescentViolation);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    CHECK(*t.records[i].f_gap <= *t.records[i - 1].f_gap + 1e-12);
  }
}

TEST_CASE("interval step mode uses alpha = 1/l_bar") {
  const auto p = rank_deficient_ls(341);
  SolverConfig cfg;
  cfg.max_iters = 50;
  cfg.step_mode = StepMode::Interval;
  cfg.l_bar = 2.0 * p.l_f;
  const Trace t = run_gm(p, random_vector(8, 3420), cfg);
  CHECK(t.status != TerminalStatus::DescentViolation);
  // Slower than the 1/L_f step but still a descent run.
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    CHECK(*t.records[i].f_gap <= *t.records[i - 1].f_gap + 1e-12);
  }
}

TEST_CASE("fgm momentum formula") {
  CHECK(fgm_momentum(4.0, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(fgm_momentum(4.0, 4.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fgm_momentum(1.0, 2.0), Error);
}

TEST_CASE("fgm with kappa = L_f reproduces the gradient method bitwise") {
  const auto p = rank_deficient_ls(351);
  const Vector x0 = random_vector(8, 3520);
  SolverConfig cfg;
  cfg.max_iters = 40;
  cfg.stop_grad_map_tol = 0.0;
  const Trace gm = run_gm(p, x0, cfg);
  const Trace fgm = fgm_const_run(p, x0, p.l_f, cfg);
  REQUIRE(gm.records.size() == fgm.records.size());
  for (std::size_t i = 0; i < gm.records.size(); ++i) {
    CHECK(std::abs(*gm.records[i].f_gap - *fgm.records[i].f_gap) <= 1e-14 * (1.0 + *gm.records[i].f_gap));
    CHECK(std::abs(gm.records[i].grad_map_norm - fgm.records[i].grad_map_norm) <= 1e-14);
  }
  for (std::size_t i = 0; i < gm.final_x.size(); ++i) {
    CHECK(std::abs(gm.final_x[i] - fgm.final_x[i]) <= 1e-14 * (1.0 + std::abs(gm.final_x[i])));
  }
}

TEST_CASE("fgm function-value rate on a PSD linear system") {
  // Rank-deficient PSD Q; the fast method contracts f by (1 - sqrt(mu)).
  const Matrix g = random_rank_deficient(8, 8, 4, 361);
  Matrix q(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 8; ++k) s += g(k, i) * g(k, j);
      q(i, j) = s;
    }
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) q(j, i) = q(i, j);
  const Vector x_s = random_vector(8, 362);
  const auto p = qp_problem(q, scale(matvec(q, x_s), -1.0));
  const auto constants = structured_constants(p);

  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.record_distances = false;
  const Vector x0 = random_vector(8, 363);
  const Trace t = fgm_const_run(p, x0, constants.kappa_f, cfg);
  CHECK(t.rate_guaranteed);
  const double f0 = *t.records[0].f_gap;
  const double factor = 1.0 - std::sqrt(constants.mu_f);
  for (const auto& rec : t.records) {
    if (rec.k == 0) continue;
    const double bound = 2.0 * f0 * std::pow(factor, static_cast<double>(rec.k));
    CHECK(*rec.f_gap <= bound * (1.0 + 1e-8) + 1e-18);
  }
}

TEST_CASE("fgm flags constrained runs as rate-not-guaranteed") {
  const Matrix a = Matrix::from_rows({{1.0, 0.0}});
  const auto p = make_structured_problem(a, Vector(),
                                         InnerFunction::shifted_half_squared_norm({1.0}),
                                         FeasibleSet::nonneg_orthant(2), std::nullopt, std::nullopt);
  SolverConfig cfg;
  cfg.max_iters = 5;
  cfg.record_distances = false;
  const Trace t = fgm_const_run(p, {0.5, 0.5}, p.l_f * 0.5, cfg);
  CHECK_FALSE(t.rate_guaranteed);
}

TEST_CASE("theta schedule values") {
  const auto [theta1, beta1] = theta_schedule(1);
  CHECK(theta1 == doctest::Approx(1.0));
  CHECK(beta1 == doctest::Approx(0.0));
  const auto [theta2, beta2] = theta_schedule(2);
  CHECK(theta2 == doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-12));
  for (std::size_t k = 1; k <= 30; ++k) {
    CHECK(theta_schedule(k).first >= (static_cast<double>(k) + 1.0) / 2.0 - 1e-12);
  }
}

TEST_CASE("theta-schedule fgm stays under the sublinear envelope") {
  for (std::uint64_t seed : {371, 372}) {
    const auto p = rank_deficient_ls(seed, 6, 10, 4);
    SolverConfig cfg;
    cfg.max_iters = 300;
    const Vector x0 = random_vector(10, seed + 5);
    const Trace t = fgm_theta_run(p, x0, cfg);
    const double d0 = *t.records[0].dist_sq;
    for (const auto& rec : t.records) {
      if (rec.k == 0) continue;
      const double kd = static_cast<double>(rec.k);
      CHECK(*rec.f_gap <= 2.0 * p.l_f * d0 / ((kd + 1.0) * (kd + 1.0)) * (1.0 + 1e-9) + 1e-18);
    }
  }
}

TEST_CASE("theta-schedule fgm fixes optimal starts") {
  const auto p = rank_deficient_ls(381);
  const auto projector = OptimalSetProjector::build(p);
  const Vector x_star = projector->project(random_vector(8, 382));
  SolverConfig cfg;
  cfg.max_iters = 10;
  cfg.stop_grad_map_tol = 0.0;
  const Trace t = fgm_theta_run(p, x_star, cfg);
  for (const auto& rec : t.records) CHECK(*rec.f_gap <= 1e-18);
}

TEST_CASE("theta-schedule fgm agrees with gm for the first two iterates") {
  const auto p = rank_deficient_ls(391);
  const Vector x0 = random_vector(8, 3920);
  SolverConfig cfg;
  cfg.max_iters = 2;
  cfg.stop_grad_map_tol = 0.0;
  const Trace gm = run_gm(p, x0, cfg);
  const Trace theta = fgm_theta_run(p, x0, cfg);
  // beta_1 = 0, so the second projected step still coincides with gm.
  CHECK(std::abs(*gm.records[1].f_gap - *theta.records[1].f_gap) <= 1e-15);
  CHECK(std::abs(*gm.records[2].f_gap - *theta.records[2].f_gap) <=
        1e-13 * (1.0 + *gm.records[2].f_gap));
}

TEST_CASE("rfgm interval formula") {
  CHECK(rfgm_interval(1.0, std::exp(-2.0)) == 6);  // ceil(2e)
  CHECK(rfgm_interval(0.25, std::exp(-2.0)) == 11);
}

TEST_CASE("rfgm block contraction across restarts") {
  const auto p = rank_deficient_ls(401, 6, 12, 4);
  const auto constants = structured_constants(p);
  const double c = std::exp(-2.0);
  RfgmOptions opt;
  opt.mu = constants.mu_f;
  SolverConfig cfg;
  cfg.max_iters = 12 * rfgm_interval(constants.mu_f, c);
  cfg.record_distances = false;
  cfg.stop_grad_map_tol = 0.0;
  const Trace t = rfgm_run(p, random_vector(12, 4020), opt, cfg);

  const double f0 = *t.records[0].f_gap;
  double expected = f0;
  std::size_t restarts = 0;
  for (const auto& rec : t.records) {
    if (!rec.restart) continue;
    ++restarts;
    expected *= c;
    CHECK(*rec.f_gap <= expected * (1.0 + 1e-8) + 1e-20);
  }
  CHECK(restarts >= 10);
}

TEST_CASE("rfgm residual restart mode runs and contracts residuals blockwise") {
  const LpData lp = gen_random_lp(4, 6, 1.0, 411);
  const auto p = build_lp_embedding(lp.e, lp.b, lp.c);
  RfgmOptions opt;
  opt.c = 0.1;  // residual mode: every restart is condition-triggered
  opt.mode = RestartMode::Residual;
  SolverConfig cfg;
  cfg.max_iters = 3000;
  cfg.record_distances = false;
  const Trace t = rfgm_run(p, Vector(p.dim(), 0.0), opt, cfg);
  double prev_resid = std::sqrt(2.0 * *t.records[0].f_gap);
  bool any_restart = false;
  for (const auto& rec : t.records) {
    if (!rec.restart) continue;
    any_restart = true;
    const double resid = std::sqrt(2.0 * *rec.f_gap);
    CHECK(resid <= 0.1 * prev_resid * (1.0 + 1e-6));
    prev_resid = resid;
  }
  CHECK(any_restart);
}

TEST_CASE("cyclic cd solves diagonal systems in one cycle") {
  Matrix a = Matrix::identity(4);
  a(1, 1) = 2.0;
  a(2, 2) = 0.5;
  const Vector d = random_vector(4, 421);
  const auto p = make_structured_problem(a, Vector(),
                                         InnerFunction::shifted_half_squared_norm(d),
                                         FeasibleSet::whole_space(4), std::nullopt, 0.0);
  SolverConfig cfg;
  cfg.max_iters = 3;
  const Trace t = cyclic_cd_run(p, random_vector(4, 422), cfg);
  CHECK(*t.records[1].f_gap <= 1e-20);
}

TEST_CASE("cyclic cd in one dimension is exact minimization") {
  const auto p = one_dim_half_square();
  SolverConfig cfg;
  cfg.max_iters = 2;
  const Trace t = cyclic_cd_run(p, {3.0}, cfg);
  CHECK(*t.records[1].f_gap <= 1e-20);
}

TEST_CASE("cyclic cd rejects zero columns") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;  // second column all zero
  const auto p = make_structured_problem(a, Vector(),
                                         InnerFunction::shifted_half_squared_norm({0.0, 0.0}),
                                         FeasibleSet::whole_space(2), std::nullopt, std::nullopt);
  SolverConfig cfg;
  CHECK_THROWS_AS(cyclic_cd_run(p, {1.0, 1.0}, cfg), Error);
}

TEST_CASE("cyclic cd never increases f and satisfies the per-cycle decrease") {
  const LpData lp = gen_random_lp(4, 6, 1.0, 431);
  const auto p = build_lp_embedding(lp.e, lp.b, lp.c);
  // Column norms for the decrease constant.
  double l = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.a.rows(); ++i) s += p.a(i, j) * p.a(i, j);
    l = std::min(l, s);
  }
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.record_distances = false;
  const Trace t = cyclic_cd_run(p, Vector(p.dim(), 0.0), cfg);
  CHECK(t.status != TerminalStatus::DescentViolation);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    CHECK(*t.records[i].f_gap <= *t.records[i - 1].f_gap + 1e-12);
  }
  (void)l;
}

TEST_CASE("gm contraction factor feeds back into a passing growth certificate") {
  const auto p = rank_deficient_ls(441, 6, 10, 4);
  SolverConfig cfg;
  cfg.max_iters = 60;
  cfg.stop_grad_map_tol = 0.0;
  const Trace t = run_gm(p, random_vector(10, 4420), cfg);
  double beta_sq = 0.0;
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double prev = *t.records[i - 1].dist_sq;
    if (prev <= 1e-20) break;
    beta_sq = std::max(beta_sq, *t.records[i].dist_sq / prev);
  }
  const double beta = std::sqrt(beta_sq);
  REQUIRE(beta < 1.0);
  const double kappa_hat = contraction_to_qfg(beta, p.l_f);
  const auto cert = check_condition(ConditionKind::FuncGrowth, p, kappa_hat, 2000, 443);
  CHECK(kappa_hat <= cert.kappa_empirical * 1.05);
}

TEST_CASE("trace csv round trip") {
  const auto p = rank_deficient_ls(451);
  SolverConfig cfg;
  cfg.max_iters = 7;
  cfg.stop_grad_map_tol = 0.0;
  Trace t = run_gm(p, random_vector(8, 4520), cfg);
  t.records[3].restart = true;

  std::ostringstream buffer;
  write_trace_csv(buffer, t);
  std::istringstream input(buffer.str());
  const Trace back = read_trace_csv(input);

  REQUIRE(back.records.size() == t.records.size());
  CHECK(back.status == t.status);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(back.records[i].k == t.records[i].k);
    CHECK(back.records[i].restart == t.records[i].restart);
    CHECK(*back.records[i].f_gap == *t.records[i].f_gap);            // bit-exact
    CHECK(*back.records[i].dist_sq == *t.records[i].dist_sq);        // bit-exact
    CHECK(back.records[i].grad_map_norm == t.records[i].grad_map_norm);
  }
}

TEST_CASE("trace csv rejects malformed input") {
  std::istringstream bad_header("k,f_gap\n0,1\n");
  CHECK_THROWS_AS(read_trace_csv(bad_header), ParseError);
  std::istringstream bad_row("k,f_gap,dist_sq,grad_map_norm,restart\n0,1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad_row), ParseError);
}

TEST_CASE("gm per-step ratio under functional growth on a constrained embedding") {
  const LpData lp = gen_random_lp(1, 2, 1.0, 461);
  const auto p = build_lp_embedding(lp.e, lp.b, lp.c);
  auto [c_ineq, d_ineq] = p.set.inequality_form();
  const double theta = hoffman_theta(p.a, &c_ineq);
  const double mu = p.g.sigma_g / (theta * theta) / p.l_f;

  SolverConfig cfg;
  cfg.max_iters = 150;
  cfg.stop_grad_map_tol = 0.0;
  Rng rng(462);
  const Trace t = run_gm(p, p.set.project(rng.normal_vector(p.dim())), cfg);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double prev = *t.records[i - 1].dist_sq;
    if (prev <= 1e-22) break;
    CHECK(*t.records[i].dist_sq / prev <= 1.0 / (1.0 + mu) + 1e-10);
  }
}

TEST_CASE("interval-mode gm keeps the per-step ratio at alpha = 1/l_bar") {
  const auto p = rank_deficient_ls(471, 6, 12, 4);
  const auto constants = structured_constants(p);
  SolverConfig cfg;
  cfg.max_iters = 120;
  cfg.step_mode = StepMode::Interval;
  cfg.l_bar = 3.0 * p.l_f;
  cfg.stop_grad_map_tol = 0.0;
  const double alpha = 1.0 / cfg.l_bar;
  const double bound = (1.0 - alpha * constants.kappa_f) / (1.0 + alpha * constants.kappa_f);
  const Trace t = run_gm(p, random_vector(12, 4720), cfg);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double prev = *t.records[i - 1].dist_sq;
    if (prev <= 1e-22) break;
    CHECK(*t.records[i].dist_sq / prev <= bound + 1e-10);
  }
}

TEST_CASE("quadratic-form objective end to end") {
  // g(z) = 1/2 z^T H z + h^T z with H = diag(2, 1); target t* = (1, -1)
  // corresponds to h = -H t*.
  const Matrix h = Matrix::from_rows({{2.0, 0.0}, {0.0, 1.0}});
  const Vector h_lin{-2.0, 1.0};
  auto g = InnerFunction::quadratic_form(h, h_lin);
  const double f_star = g.value({1.0, -1.0});
  const Matrix a = Matrix::identity(2);
  const auto p = make_structured_problem(a, Vector(), std::move(g), FeasibleSet::whole_space(2),
                                         OptimalSetInfo{{1.0, -1.0}, {}}, f_star);
  const auto constants = structured_constants(p);
  CHECK(constants.l_f == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(constants.kappa_f == doctest::Approx(1.0).epsilon(1e-10));

  SolverConfig cfg;
  cfg.max_iters = 200;
  const Trace t = run_gm(p, {5.0, 5.0}, cfg);
  CHECK(t.status == TerminalStatus::Converged);
  CHECK(std::abs(t.final_x[0] - 1.0) <= 1e-8);
  CHECK(std::abs(t.final_x[1] + 1.0) <= 1e-8);
}

TEST_CASE("trace invariants: increasing k, nonnegative distances, f_gap floor") {
  const auto p = rank_deficient_ls(481, 6, 10, 4);
  SolverConfig cfg;
  cfg.max_iters = 500;
  const Trace t = run_gm(p, random_vector(10, 4820), cfg);
  CHECK(t.status == TerminalStatus::Converged);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(t.records[i].k == i);
    CHECK(*t.records[i].dist_sq >= 0.0);
    CHECK(*t.records[i].f_gap >= -1e-9);
  }
}

TEST_CASE("rfgm function-value restarts contract the gap by c per block") {
  const auto p = rank_deficient_ls(491, 6, 12, 4);
  const auto constants = structured_constants(p);
  const double c = std::exp(-2.0);
  RfgmOptions opt;
  opt.mu = constants.mu_f;
  opt.mode = RestartMode::FunctionValue;
  SolverConfig cfg;
  cfg.max_iters = 14 * rfgm_interval(constants.mu_f, c);
  cfg.stop_grad_map_tol = 0.0;
  cfg.record_distances = false;
  const Trace t = rfgm_run(p, random_vector(12, 4920), opt, cfg);

  double block_start_gap = *t.records[0].f_gap;
  std::size_t restarts = 0;
  std::size_t last_restart_k = 0;
  for (const auto& rec : t.records) {
    if (!rec.restart) continue;
    ++restarts;
    CHECK(*rec.f_gap <= c * block_start_gap * (1.0 + 1e-8) + 1e-20);
    // Early restarts never exceed the block cap.
    CHECK(rec.k - last_restart_k <= rfgm_interval(constants.mu_f, c));
    last_restart_k = rec.k;
    block_start_gap = *rec.f_gap;
  }
  CHECK(restarts >= 10);
}
