#include "growthrates/classes.hpp"

#include <cmath>
#include <limits>

#include "growthrates/rng.hpp"

namespace growthrates {

std::string condition_name(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::QuasiStrong: return "quasi-strong";
    case ConditionKind::UnderApprox: return "under-approx";
    case ConditionKind::GradGrowth: return "grad-growth";
    case ConditionKind::FuncGrowth: return "func-growth";
    case ConditionKind::ErrorBound: return "error-bound";
    case ConditionKind::StrongConvexLower: return "strong-convex-lower";
  }
  return "?";
}

std::optional<ConditionKind> condition_from_name(const std::string& name) {
  if (name == "quasi-strong") return ConditionKind::QuasiStrong;
  if (name == "under-approx") return ConditionKind::UnderApprox;
  if (name == "grad-growth") return ConditionKind::GradGrowth;
  if (name == "func-growth") return ConditionKind::FuncGrowth;
  if (name == "error-bound") return ConditionKind::ErrorBound;
  if (name == "strong-convex-lower") return ConditionKind::StrongConvexLower;
  return std::nullopt;
}

Vector gradient_map(const StructuredProblem& p, const Vector& x) {
  auto [value, grad] = eval_grad(p, x);
  (void)value;
  if (p.set.kind() == SetKind::WholeSpace) return grad;
  Vector step = x;
  axpy(-1.0 / p.l_f, grad, step);
  const Vector plus = p.set.project(step);
  Vector out = sub(x, plus);
  return scale(out, p.l_f);
}

namespace {

constexpr double kTinyDistance = 1e-12;

struct SampleCheck {
  double violation;                 // positive = condition failed by that margin
  std::optional<double> kappa_ratio;  // per-sample largest passing kappa
};

SampleCheck evaluate_condition(ConditionKind kind, const StructuredProblem& p, double kappa,
                               const Vector& x, const Vector& x_bar, double f_star,
                               const Vector* pair_y) {
  const double dist_sq_val = distance_sq(x, x_bar);
  const double dist = std::sqrt(dist_sq_val);
  SampleCheck out{0.0, std::nullopt};

  switch (kind) {
    case ConditionKind::QuasiStrong: {
      auto [fx, gx] = eval_grad(p, x);
      const double slack = f_star - fx - cdot(gx, sub(x_bar, x));  // >= k/2 d^2 required
      out.violation = 0.5 * kappa * dist_sq_val - slack;
      if (dist_sq_val > kTinyDistance) out.kappa_ratio = 2.0 * slack / dist_sq_val;
      break;
    }
    case ConditionKind::UnderApprox: {
      const double fx = eval_value(p, x);
      auto [fbar, gbar] = eval_grad(p, x_bar);
      (void)fbar;
      const double slack = fx - f_star - cdot(gbar, sub(x, x_bar));
      out.violation = 0.5 * kappa * dist_sq_val - slack;
      if (dist_sq_val > kTinyDistance) out.kappa_ratio = 2.0 * slack / dist_sq_val;
      break;
    }
    case ConditionKind::GradGrowth: {
      auto [fx, gx] = eval_grad(p, x);
      auto [fbar, gbar] = eval_grad(p, x_bar);
      (void)fx;
      (void)fbar;
      const double slack = cdot(sub(gx, gbar), sub(x, x_bar));
      out.violation = kappa * dist_sq_val - slack;
      if (dist_sq_val > kTinyDistance) out.kappa_ratio = slack / dist_sq_val;
      break;
    }
    case ConditionKind::FuncGrowth: {
      const double slack = eval_value(p, x) - f_star;
      out.violation = 0.5 * kappa * dist_sq_val - slack;
      if (dist_sq_val > kTinyDistance) out.kappa_ratio = 2.0 * slack / dist_sq_val;
      break;
    }
    case ConditionKind::ErrorBound: {
      const double gnorm = norm(gradient_map(p, x));
      out.violation = kappa * dist - gnorm;
      if (dist > kTinyDistance) out.kappa_ratio = gnorm / dist;
      break;
    }
    case ConditionKind::StrongConvexLower: {
      if (pair_y == nullptr) throw Error("strong-convex-lower needs point pairs");
      auto [fx, gx] = eval_grad(p, x);
      const double fy = eval_value(p, *pair_y);
      const double pd = distance_sq(x, *pair_y);
      const double slack = fy - fx - cdot(gx, sub(*pair_y, x));
      out.violation = 0.5 * kappa * pd - slack;
      if (pd > kTinyDistance) out.kappa_ratio = 2.0 * slack / pd;
      break;
    }
  }
  if (!std::isfinite(out.violation)) throw DivergedError("check_condition: non-finite oracle value");
  return out;
}

}  // namespace

ClassCertificate check_condition(ConditionKind kind, const StructuredProblem& p, double kappa,
                                 std::size_t samples, std::uint64_t seed,
                                 std::optional<double> sublevel_bound) {
  if (!p.optimal_set) throw Error("check_condition: problem carries no optimal-set description");
  const auto projector = OptimalSetProjector::build(p);
  if (!projector) {
    throw Error("check_condition: exact optimal-set projection is not computable at this scale");
  }

  const Vector origin(p.dim(), 0.0);
  const Vector base = projector->project(p.set.project(origin));
  const double f_star = p.f_star ? *p.f_star : eval_value(p, base);

  Rng root(seed);
  constexpr double kRadii[3] = {0.1, 1.0, 10.0};

  ClassCertificate cert;
  cert.kind = kind;
  cert.kappa_tested = kappa;
  cert.num_samples = samples;
  cert.seed = seed;
  cert.worst_violation = -std::numeric_limits<double>::infinity();
  cert.kappa_empirical = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < samples; ++i) {
    // Counter-based splitting keeps results identical under any evaluation
    // order for a fixed seed.
    Rng stream = root.substream(i);
    const double radius = kRadii[i % 3];

    Vector x;
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < 100000; ++attempt) {
      Vector raw = stream.normal_vector(p.dim());
      x = add(base, scale(raw, radius));
      x = p.set.project(x);
      if (!sublevel_bound || eval_value(p, x) - f_star <= *sublevel_bound) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw Error("check_condition: could not sample the sublevel set");

    Vector x_bar = projector->project(x);
    std::optional<Vector> pair_y;
    if (kind == ConditionKind::StrongConvexLower) {
      pair_y = p.set.project(add(base, scale(stream.normal_vector(p.dim()), radius)));
    }
    const SampleCheck check =
        evaluate_condition(kind, p, kappa, x, x_bar, f_star, pair_y ? &*pair_y : nullptr);
    cert.worst_violation = std::max(cert.worst_violation, check.violation);
    if (check.kappa_ratio) cert.kappa_empirical = std::min(cert.kappa_empirical, *check.kappa_ratio);
  }
  return cert;
}

ClassCertificate check_condition_at_points(ConditionKind kind, const StructuredProblem& p,
                                           double kappa, std::span<const Vector> points) {
  if (!p.optimal_set) throw Error("check_condition: problem carries no optimal-set description");
  const auto projector = OptimalSetProjector::build(p);
  if (!projector) {
    throw Error("check_condition: exact optimal-set projection is not computable at this scale");
  }
  if (kind == ConditionKind::StrongConvexLower && points.size() < 2) {
    throw Error("strong-convex-lower needs at least two points");
  }
  const Vector origin(p.dim(), 0.0);
  const double f_star =
      p.f_star ? *p.f_star : eval_value(p, projector->project(p.set.project(origin)));

  ClassCertificate cert;
  cert.kind = kind;
  cert.kappa_tested = kappa;
  cert.num_samples = points.size();
  cert.worst_violation = -std::numeric_limits<double>::infinity();
  cert.kappa_empirical = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vector& x = points[i];
    const Vector x_bar = projector->project(x);
    const Vector* pair_y = nullptr;
    if (kind == ConditionKind::StrongConvexLower) pair_y = &points[(i + 1) % points.size()];
    const SampleCheck check = evaluate_condition(kind, p, kappa, x, x_bar, f_star, pair_y);
    cert.worst_violation = std::max(cert.worst_violation, check.violation);
    if (check.kappa_ratio) cert.kappa_empirical = std::min(cert.kappa_empirical, *check.kappa_ratio);
  }
  return cert;
}

double convert_constant(ConditionKind from, ConditionKind to, double kappa, double l_f) {
  if (kappa <= 0.0 || l_f <= 0.0) throw Error("convert_constant: constants must be positive");
  using K = ConditionKind;
  if (from == K::QuasiStrong && (to == K::GradGrowth || to == K::UnderApprox || to == K::FuncGrowth))
    return kappa;
  if (from == K::GradGrowth && to == K::UnderApprox) return kappa;
  if (from == K::UnderApprox && to == K::FuncGrowth) return kappa;
  if (from == K::UnderApprox && to == K::GradGrowth) return 0.5 * kappa;
  if (from == K::ErrorBound && to == K::FuncGrowth) return kappa * kappa / l_f;
  if (from == K::FuncGrowth && to == K::ErrorBound) {
    const double mu = kappa / l_f;
    return kappa / (1.0 + mu + std::sqrt(1.0 + mu));
  }
  throw Error("convert_constant: unsupported edge " + condition_name(from) + " -> " +
              condition_name(to));
}

double contraction_to_qfg(double beta, double l_f) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("contraction_to_qfg: beta must be in (0, 1)");
  return l_f * (1.0 - beta) * (1.0 - beta);
}

}  // namespace growthrates
