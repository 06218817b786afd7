#pragma once

#include <optional>
#include <string>
#include <vector>

#include "growthrates/solvers.hpp"

namespace growthrates {

enum class RateMethod { GmQs, GmF, FgmConst, FgmThetaSublinear, Rfgm, Fdm };

std::string rate_method_name(RateMethod m);
std::optional<RateMethod> rate_method_from_name(const std::string& name);

struct FdmParams {
  double l = 0.0;      // sufficient-decrease constant
  double beta = 0.0;   // gradient perturbation bound factor
  double l_bar = 0.0;  // step-size bound, alpha_k >= 1/l_bar
};

struct RateModel {
  RateMethod method = RateMethod::GmQs;
  double mu = 0.0;
  double l_f = 0.0;
  std::optional<double> dist0_sq;  // ||x0 - xbar0||^2
  std::optional<double> f_gap0;    // f(x0) - f*
  std::optional<FdmParams> fdm;
};

// Per-iteration contraction factor of the linear-rate methods:
//   GmQs (1-mu)/(1+mu); GmF 1/(1+mu); FgmConst 1-sqrt(mu);
//   Rfgm exp(-sqrt(mu)/e); Fdm 1/(1 + L kappa / (4 (L_f+Lbar+beta Lbar)^2)).
// The sublinear theta-schedule method has no factor (use bound_curve).
double theoretical_factor(const RateModel& m);

// Tightest applicable f-gap upper bound at iteration k >= 1:
//   GmQs:  (L_f d0/2) mu / ((1-mu)^{-k} - 1), continuous as mu -> 0;
//   GmF:   (L_f d0/2) min_{t=0..k-1} 1/((1+mu)^t (k-t));
//   FgmThetaSublinear: 2 L_f d0 / (k+1)^2;
//   FgmConst: (1-sqrt(mu))^k 2 f_gap0;  Rfgm/Fdm: factor^k f_gap0.
double bound_curve(const RateModel& m, std::size_t k);

enum class TraceMetric { FGap, DistSq };

// Least-squares slope of log(metric) over records with k in [k_lo, k_hi],
// exponentiated to a per-step factor. Nonpositive tail values shrink the
// window; fewer than two usable points is an error.
double empirical_rate(const Trace& t, TraceMetric metric, std::size_t k_lo, std::size_t k_hi);

// Middle 60% of the iteration range, skipping transients and the
// floating-point floor.
std::pair<std::size_t, std::size_t> default_window(const Trace& t);

double empirical_rate(const Trace& t, TraceMetric metric);  // default window

struct RateReport {
  std::vector<std::size_t> ks;
  std::vector<double> margins;  // bound - measured, per k
  double worst_margin = 0.0;
  double empirical_factor = 0.0;    // NaN when the fit is unavailable
  double theoretical_factor = 0.0;  // NaN for sublinear methods
  bool pass = false;
};

// Compares metric(k) against the model bound at every recorded k >= 1:
// f-gap against bound_curve, squared distance against factor^k * dist0_sq.
// Passes iff measured <= bound + tol * max(1, |bound|) everywhere.
RateReport verify_bound(const Trace& t, const RateModel& m, TraceMetric metric, double tol);

}  // namespace growthrates
