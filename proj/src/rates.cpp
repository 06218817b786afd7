#include "growthrates/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace growthrates {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string rate_method_name(RateMethod m) {
  switch (m) {
    case RateMethod::GmQs: return "gm-qs";
    case RateMethod::GmF: return "gm-f";
    case RateMethod::FgmConst: return "fgm-const";
    case RateMethod::FgmThetaSublinear: return "fgm-theta";
    case RateMethod::Rfgm: return "rfgm";
    case RateMethod::Fdm: return "fdm";
  }
  return "?";
}

std::optional<RateMethod> rate_method_from_name(const std::string& name) {
  if (name == "gm-qs") return RateMethod::GmQs;
  if (name == "gm-f") return RateMethod::GmF;
  if (name == "fgm-const") return RateMethod::FgmConst;
  if (name == "fgm-theta") return RateMethod::FgmThetaSublinear;
  if (name == "rfgm") return RateMethod::Rfgm;
  if (name == "fdm") return RateMethod::Fdm;
  return std::nullopt;
}

double theoretical_factor(const RateModel& m) {
  if (!(m.mu > 0.0)) throw Error("rate model: mu must be positive");
  switch (m.method) {
    case RateMethod::GmQs:
      if (m.mu > 1.0 + 1e-12) throw Error("rate model: GM quasi-strong factor needs mu <= 1");
      return (1.0 - m.mu) / (1.0 + m.mu);
    case RateMethod::GmF:
      return 1.0 / (1.0 + m.mu);
    case RateMethod::FgmConst:
      if (m.mu > 1.0 + 1e-12) throw Error("rate model: FGM factor needs mu <= 1");
      return 1.0 - std::sqrt(m.mu);
    case RateMethod::Rfgm:
      return std::exp(-std::sqrt(m.mu) / std::exp(1.0));
    case RateMethod::Fdm: {
      if (!m.fdm) throw Error("rate model: FDM needs (L, beta, Lbar)");
      const double kappa = m.mu * m.l_f;
      const double denom = m.l_f + m.fdm->l_bar + m.fdm->beta * m.fdm->l_bar;
      return 1.0 / (1.0 + m.fdm->l * kappa / (4.0 * denom * denom));
    }
    case RateMethod::FgmThetaSublinear:
      throw Error("rate model: the theta schedule is sublinear; use bound_curve");
  }
  throw Error("rate model: unknown method");
}

namespace {

double require_init(const std::optional<double>& v, const char* what) {
  if (!v) throw Error(std::string("rate model: missing ") + what);
  if (*v < 0.0) throw Error(std::string("rate model: negative ") + what);
  return *v;
}

}  // namespace

double bound_curve(const RateModel& m, std::size_t k) {
  if (k < 1) throw Error("bound_curve: k starts at 1");
  const double kd = static_cast<double>(k);
  switch (m.method) {
    case RateMethod::GmQs: {
      const double d0 = require_init(m.dist0_sq, "dist0_sq");
      if (m.mu >= 1.0) return 0.0;
      // mu / ((1-mu)^{-k} - 1), evaluated stably so the mu -> 0 limit
      // L_f d0 / (2k) is reached without cancellation.
      const double denom = std::expm1(-kd * std::log1p(-m.mu));
      return 0.5 * m.l_f * d0 * (m.mu / denom);
    }
    case RateMethod::GmF: {
      const double d0 = require_init(m.dist0_sq, "dist0_sq");
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < k; ++t) {
        const double v = 1.0 / (std::pow(1.0 + m.mu, static_cast<double>(t)) * (kd - static_cast<double>(t)));
        best = std::min(best, v);
      }
      return 0.5 * m.l_f * d0 * best;
    }
    case RateMethod::FgmThetaSublinear: {
      const double d0 = require_init(m.dist0_sq, "dist0_sq");
      return 2.0 * m.l_f * d0 / ((kd + 1.0) * (kd + 1.0));
    }
    case RateMethod::FgmConst: {
      const double g0 = require_init(m.f_gap0, "f_gap0");
      return std::pow(1.0 - std::sqrt(m.mu), kd) * 2.0 * g0;
    }
    case RateMethod::Rfgm:
    case RateMethod::Fdm: {
      const double g0 = require_init(m.f_gap0, "f_gap0");
      return std::pow(theoretical_factor(m), kd) * g0;
    }
  }
  throw Error("bound_curve: unknown method");
}

namespace {

std::optional<double> metric_value(const TraceRecord& rec, TraceMetric metric) {
  return metric == TraceMetric::FGap ? rec.f_gap : rec.dist_sq;
}

}  // namespace

double empirical_rate(const Trace& t, TraceMetric metric, std::size_t k_lo, std::size_t k_hi) {
  std::vector<std::pair<double, double>> points;  // (k, log v)
  std::size_t last_positive = 0;
  for (const auto& rec : t.records) {
    if (rec.k < k_lo || rec.k > k_hi) continue;
    const auto v = metric_value(rec, metric);
    if (!v) throw Error("empirical_rate: metric column absent from trace");
    if (*v > 0.0) last_positive = rec.k;
  }
  for (const auto& rec : t.records) {
    if (rec.k < k_lo || rec.k > k_hi) continue;
    const auto v = metric_value(rec, metric);
    if (*v <= 0.0) {
      if (rec.k <= last_positive) {
        throw Error("empirical_rate: nonpositive metric value inside the window");
      }
      continue;  // converged tail past the floating-point floor; shrink
    }
    points.emplace_back(static_cast<double>(rec.k), std::log(*v));
  }
  if (points.size() < 2) throw Error("empirical_rate: fewer than two usable points in the window");

  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw Error("empirical_rate: degenerate window");
  return std::exp(sxy / sxx);
}

std::pair<std::size_t, std::size_t> default_window(const Trace& t) {
  if (t.records.empty()) throw Error("default_window: empty trace");
  const std::size_t k_max = t.records.back().k;
  const auto lo = static_cast<std::size_t>(0.2 * static_cast<double>(k_max));
  const auto hi = static_cast<std::size_t>(0.8 * static_cast<double>(k_max));
  return {std::max<std::size_t>(lo, 1), std::max<std::size_t>(hi, 2)};
}

double empirical_rate(const Trace& t, TraceMetric metric) {
  const auto [lo, hi] = default_window(t);
  return empirical_rate(t, metric, lo, hi);
}

RateReport verify_bound(const Trace& t, const RateModel& m, TraceMetric metric, double tol) {
  RateReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  bool any = false;

  const bool dist_metric = metric == TraceMetric::DistSq;
  double factor = kNaN;
  if (dist_metric || (m.method != RateMethod::FgmThetaSublinear && m.method != RateMethod::GmQs &&
                      m.method != RateMethod::GmF)) {
    factor = theoretical_factor(m);
  }
  for (const auto& rec : t.records) {
    if (rec.k < 1) continue;
    const auto v = metric_value(rec, metric);
    if (!v) throw Error("verify_bound: metric column absent from trace");
    double bound;
    if (dist_metric) {
      const double d0 = require_init(m.dist0_sq, "dist0_sq");
      bound = std::pow(factor, static_cast<double>(rec.k)) * d0;
    } else {
      bound = bound_curve(m, rec.k);
    }
    const double margin = bound - *v;
    report.ks.push_back(rec.k);
    report.margins.push_back(margin);
    report.worst_margin = std::min(report.worst_margin, margin);
    if (*v > bound + tol * std::max(1.0, std::abs(bound))) ok = false;
    any = true;
  }
  if (!any) throw Error("verify_bound: trace has no records with k >= 1");
  report.pass = ok;
  try {
    report.empirical_factor = empirical_rate(t, metric);
  } catch (const Error&) {
    report.empirical_factor = kNaN;
  }
  try {
    report.theoretical_factor = theoretical_factor(m);
  } catch (const Error&) {
    report.theoretical_factor = kNaN;
  }
  return report;
}

}  // namespace growthrates
