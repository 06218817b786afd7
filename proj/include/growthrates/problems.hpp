#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "growthrates/linalg.hpp"
#include "growthrates/sets.hpp"

namespace growthrates {

// Smooth strongly convex inner function g of a structured objective
// f(x) = g(A x) + c^T x.
struct InnerFunction {
  enum class Kind { ShiftedHalfSquaredNorm, QuadraticForm };

  Kind kind = Kind::ShiftedHalfSquaredNorm;
  Vector target;  // d in g(z) = 1/2 ||z - d||^2
  Matrix h;       // symmetric positive definite H in g(z) = 1/2 z^T H z + h^T z
  Vector h_lin;
  double sigma_g = 1.0;
  double l_g = 1.0;

  static InnerFunction shifted_half_squared_norm(Vector d);
  static InnerFunction quadratic_form(Matrix h, Vector lin);

  std::size_t dim() const { return kind == Kind::ShiftedHalfSquaredNorm ? target.size() : h.rows(); }
  double value(const Vector& z) const;
  Vector gradient(const Vector& z) const;
};

// Exact polyhedral description of the optimal set:
//   X* = {x : A x = t*, (c^T x = s* when present), x in X}.
struct OptimalSetInfo {
  Vector t_star;
  std::optional<double> s_star;
};

struct StructuredProblem {
  Matrix a;
  Vector linear_term;  // c; all zeros when absent
  InnerFunction g;
  FeasibleSet set;
  double l_f = 0.0;  // = L_g ||A||^2, fixed at construction
  std::optional<OptimalSetInfo> optimal_set;
  std::optional<double> f_star;

  std::size_t dim() const { return a.cols(); }
  bool has_linear_term() const;
};

StructuredProblem make_structured_problem(Matrix a, Vector c, InnerFunction g, FeasibleSet set,
                                          std::optional<OptimalSetInfo> optimal_set = {},
                                          std::optional<double> f_star = {});

// (f(x), grad f(x)) with grad f(x) = A^T grad g(A x) + c.
std::pair<double, Vector> eval_grad(const StructuredProblem& p, const Vector& x);
double eval_value(const StructuredProblem& p, const Vector& x);

enum class ClassTag { QuasiStrong, GradGrowth, FuncGrowth };

struct ProblemConstants {
  double l_f = 0.0;
  double kappa_f = 0.0;
  double mu_f = 0.0;  // kappa_f / l_f
  double hoffman_theta = 0.0;
  ClassTag class_tag = ClassTag::QuasiStrong;
};

// Constants of the structured objective:
//   no linear term:   kappa = sigma_g / theta^2(A, C)  (quasi-strong class);
//                     unconstrained this is sigma_g * sigma_min(A)^2;
//   linear term, unconstrained: kappa = sigma_g / theta^2(A, 0) (gradient
//                     growth class);
//   linear term, constrained:   functional growth on the sublevel set
//                     f - f* <= M, with kappa = sigma_g /
//                     (theta^2([A; c^T], C) (1 + M sigma_g + 2 c_g^2)) and
//                     c_g = ||grad g(t*)||; requires `sublevel_bound`.
ProblemConstants structured_constants(const StructuredProblem& p,
                                      std::optional<double> sublevel_bound = {});

// Index-set enumeration cap for the Hoffman constant of {Ax=b, Cx<=d}.
inline constexpr std::size_t kMaxHoffmanRows = 20;

// Hoffman constant of the polyhedron with equality matrix A and optional
// inequality matrix C. Equality-only case: 1 / sigma_min_nonzero(A). With
// inequalities, enumerates index sets I with |I| = rank[A;C] - rank(A) and
// rank[A; C_I] = rank[A;C], and maximizes 1/sigma_min over the stacks.
double hoffman_theta(const Matrix& a, const Matrix* c = nullptr);
inline double hoffman_theta(const Matrix& a, const Matrix& c) { return hoffman_theta(a, &c); }

// --- linear programming: min <c,u> s.t. Eu = b, u >= 0 -------------------

struct LpData {
  Matrix e;
  Vector b;
  Vector c;
  Vector u_star;  // primal solution, u* >= 0
  Vector v_star;  // dual variables, free
  Vector s_star;  // dual slacks, s* >= 0, complementary to u*
  std::uint64_t seed = 0;
  double density = 1.0;
};

// Solution-first generator: the primal-dual pair is drawn before the data,
// so the LP is solvable with zero duality gap by construction and the
// self-dual embedding below has optimal value exactly 0.
LpData gen_random_lp(std::size_t m, std::size_t n_cols, double density, std::uint64_t seed);

// Homogeneous self-dual embedding: minimize 1/2 ||A x - d||^2 over
// x = (u, v, s) in R^N_+ x R^m x R^N_+, with
//   A = [0 E^T I; E 0 0; c^T -b^T 0],  d = (c, b, 0),  n = 2N + m.
StructuredProblem build_lp_embedding(const Matrix& e, const Vector& b, const Vector& c,
                                     bool known_solvable = true);

Vector embed_solution(const LpData& lp);  // (u*, v*, s*) stacked

// Residual ||A x - d|| of a shifted-half-squared-norm objective.
double embedding_residual(const StructuredProblem& p, const Vector& x);

// --- linear systems -------------------------------------------------------

// f(x) = 1/2 ||A x + b||^2 as a structured problem (optimal set recorded).
StructuredProblem least_squares_problem(Matrix a, Vector b);

// Symmetric positive semidefinite system Q x + q = 0 recast as
// f(x) = 1/2 ||L_Q (x - x_s)||^2 with Q = L_Q^T L_Q, so f* = 0. Requires q
// in the range of Q.
StructuredProblem qp_problem(const Matrix& q, const Vector& q_lin);

// Exact projector onto the optimal set described by p.optimal_set. Returns
// nullopt when the problem carries no optimal-set description or the
// polyhedral description exceeds the enumeration cap.
class OptimalSetProjector {
 public:
  static std::optional<OptimalSetProjector> build(const StructuredProblem& p);

  Vector project(const Vector& x) const;
  double distance_sq(const Vector& x) const;

 private:
  OptimalSetProjector() = default;
  std::optional<AffineProjector> affine_;
  std::shared_ptr<const PolyhedralProjector> poly_;
};

}  // namespace growthrates
