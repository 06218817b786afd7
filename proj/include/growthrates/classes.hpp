#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "growthrates/problems.hpp"

namespace growthrates {

// Relaxed strong-convexity conditions certified at sampled feasible points,
// each stated against the exact projection x_bar onto the optimal set:
//   QuasiStrong:      f* >= f(x) + <grad f(x), x_bar - x> + k/2 ||x - x_bar||^2
//   UnderApprox:      f(x) >= f* + <grad f(x_bar), x - x_bar> + k/2 ||x - x_bar||^2
//   GradGrowth:       <grad f(x) - grad f(x_bar), x - x_bar> >= k ||x - x_bar||^2
//   FuncGrowth:       f(x) - f* >= k/2 ||x - x_bar||^2
//   ErrorBound:       ||g(x)|| >= k ||x - x_bar||, g the gradient mapping
//   StrongConvexLower (two-point): f(y) >= f(x) + <grad f(x), y - x> + k/2 ||x - y||^2
enum class ConditionKind { QuasiStrong, UnderApprox, GradGrowth, FuncGrowth, ErrorBound, StrongConvexLower };

std::string condition_name(ConditionKind kind);
std::optional<ConditionKind> condition_from_name(const std::string& name);

inline constexpr double kCertificateTolerance = 1e-9;  // absolute

struct ClassCertificate {
  ConditionKind kind = ConditionKind::FuncGrowth;
  double kappa_tested = 0.0;
  std::size_t num_samples = 0;
  // Positive values mean the condition failed by that margin on some sample.
  double worst_violation = 0.0;
  // Largest kappa for which every sample passes: the per-sample infimum of
  // the condition's kappa ratio. A sampled bound, not a proof.
  double kappa_empirical = 0.0;
  std::uint64_t seed = 0;

  bool passed() const { return worst_violation <= kCertificateTolerance; }
};

// Gradient mapping g(x) = L_f (x - [x - grad f(x)/L_f]_X); equals grad f(x)
// on the whole space.
Vector gradient_map(const StructuredProblem& p, const Vector& x);

// Certifies `kind` at constant `kappa` on `samples` feasible points drawn by
// projecting Gaussians (radius sweep 0.1/1/10 around a point of the optimal
// set) onto X. Needs p.optimal_set with a computable exact projector; refuses
// to run otherwise. When `sublevel_bound` is given, samples are restricted to
// f(x) - f* <= M by rejection.
ClassCertificate check_condition(ConditionKind kind, const StructuredProblem& p, double kappa,
                                 std::size_t samples, std::uint64_t seed,
                                 std::optional<double> sublevel_bound = {});

// Same certification at caller-supplied points (e.g. solver iterates).
ClassCertificate check_condition_at_points(ConditionKind kind, const StructuredProblem& p,
                                           double kappa, std::span<const Vector> points);

// Constant conversions along the proved implications between classes.
// Supported edges: QuasiStrong->{GradGrowth,UnderApprox,FuncGrowth} and
// GradGrowth->UnderApprox and UnderApprox->FuncGrowth (kappa preserved),
// UnderApprox->GradGrowth (kappa/2), ErrorBound->FuncGrowth (kappa^2/L_f),
// FuncGrowth->ErrorBound (kappa / (1 + mu + sqrt(1 + mu))).
double convert_constant(ConditionKind from, ConditionKind to, double kappa, double l_f);

// A per-step distance contraction ||x+ - xbar+|| <= beta ||x - xbar|| forces
// quadratic functional growth with constant L_f (1 - beta)^2.
double contraction_to_qfg(double beta, double l_f);

}  // namespace growthrates
