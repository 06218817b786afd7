#include "growthrates/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "growthrates/classes.hpp"
#include "growthrates/matrix_io.hpp"

namespace growthrates {

namespace {

// Shared per-iteration bookkeeping: f-gap and exact distance when available,
// gradient-mapping norm always.
class TraceRecorder {
 public:
  TraceRecorder(const StructuredProblem& p, const SolverConfig& cfg)
      : p_(p),
        projector_(cfg.record_distances ? OptimalSetProjector::build(p) : std::nullopt) {}

  TraceRecord record(std::size_t k, const Vector& x, bool restart) const {
    TraceRecord rec;
    rec.k = k;
    rec.restart = restart;
    const double value = eval_value(p_, x);
    if (!std::isfinite(value)) {
      throw DivergedError("solver: non-finite objective value (is L_f configured correctly?)");
    }
    if (p_.f_star) rec.f_gap = value - *p_.f_star;
    if (projector_) rec.dist_sq = projector_->distance_sq(x);
    rec.grad_map_norm = norm(gradient_map(p_, x));
    return rec;
  }

 private:
  const StructuredProblem& p_;
  std::optional<OptimalSetProjector> projector_;
};

double resolve_stop_tol(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg) {
  if (cfg.stop_grad_map_tol) return *cfg.stop_grad_map_tol;
  auto [f0, g0] = eval_grad(p, x0);
  (void)f0;
  return 1e-10 * (1.0 + norm(g0));
}

double resolve_alpha(const StructuredProblem& p, const SolverConfig& cfg) {
  if (cfg.step_mode == StepMode::ConstantOneOverL) return 1.0 / p.l_f;
  if (!(cfg.l_bar >= p.l_f)) throw Error("solver: Interval step mode needs l_bar >= L_f");
  return 1.0 / cfg.l_bar;
}

}  // namespace

Vector gm_step(const StructuredProblem& p, const Vector& x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0 / p.l_f + 1e-15)) {
    throw Error("gm_step: alpha must lie in (0, 1/L_f]");
  }
  auto [value, grad] = eval_grad(p, x);
  (void)value;
  Vector y = x;
  axpy(-alpha, grad, y);
  return p.set.project(y);
}

Trace run_gm(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg) {
  Vector x = p.set.contains(x0) ? x0 : p.set.project(x0);
  const double alpha = resolve_alpha(p, cfg);
  const double stop_tol = resolve_stop_tol(p, x, cfg);
  TraceRecorder recorder(p, cfg);

  Trace trace;
  trace.records.push_back(recorder.record(0, x, false));
  if (trace.records.back().grad_map_norm <= stop_tol) {
    trace.status = TerminalStatus::Converged;
    trace.final_x = x;
    return trace;
  }
  double prev_value = eval_value(p, x);
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    x = gm_step(p, x, alpha);
    TraceRecord rec = recorder.record(k, x, false);
    const double value = eval_value(p, x);
    if (value > prev_value + 1e-12 * (1.0 + std::abs(prev_value))) {
      trace.records.push_back(rec);
      trace.status = TerminalStatus::DescentViolation;
      trace.final_x = x;
      return trace;
    }
    prev_value = value;
    trace.records.push_back(rec);
    if (rec.grad_map_norm <= stop_tol) {
      trace.status = TerminalStatus::Converged;
      trace.final_x = x;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxIters;
  trace.final_x = x;
  return trace;
}

double fgm_momentum(double l_f, double kappa) {
  if (!(kappa > 0.0)) throw Error("fgm: kappa must be positive");
  if (kappa > l_f * (1.0 + 1e-12)) throw Error("fgm: kappa must not exceed L_f");
  return (std::sqrt(l_f) - std::sqrt(kappa)) / (std::sqrt(l_f) + std::sqrt(kappa));
}

Trace fgm_const_run(const StructuredProblem& p, const Vector& x0, double kappa,
                    const SolverConfig& cfg) {
  const double beta = fgm_momentum(p.l_f, kappa);

  Vector x = p.set.contains(x0) ? x0 : p.set.project(x0);
  Vector y = x;
  const double stop_tol = resolve_stop_tol(p, x, cfg);
  TraceRecorder recorder(p, cfg);

  Trace trace;
  trace.rate_guaranteed = (p.set.kind() == SetKind::WholeSpace) && !p.has_linear_term();
  trace.records.push_back(recorder.record(0, x, false));
  if (trace.records.back().grad_map_norm <= stop_tol) {
    trace.status = TerminalStatus::Converged;
    trace.final_x = x;
    return trace;
  }
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    const Vector x_new = gm_step(p, y, 1.0 / p.l_f);
    Vector y_new = x_new;
    axpy(beta, sub(x_new, x), y_new);
    x = x_new;
    y = std::move(y_new);
    TraceRecord rec = recorder.record(k, x, false);
    trace.records.push_back(rec);
    if (rec.grad_map_norm <= stop_tol) {
      trace.status = TerminalStatus::Converged;
      trace.final_x = x;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxIters;
  trace.final_x = x;
  return trace;
}

std::pair<double, double> theta_schedule(std::size_t k) {
  if (k < 1) throw Error("theta_schedule: k starts at 1");
  double theta = 1.0;
  for (std::size_t i = 1; i < k; ++i) theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
  const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
  return {theta, (theta - 1.0) / theta_next};
}

namespace {

// theta-schedule FGM loop shared by the plain and restarted variants.
struct ThetaFgmState {
  Vector x, x_prev, y;
  double theta = 1.0;

  void reset(const Vector& start) {
    x = start;
    x_prev = start;
    y = start;
    theta = 1.0;
  }

  void step(const StructuredProblem& p) {
    Vector x_new = gm_step(p, y, 1.0 / p.l_f);
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double beta = (theta - 1.0) / theta_next;
    y = x_new;
    axpy(beta, sub(x_new, x), y);
    x_prev = std::move(x);
    x = std::move(x_new);
    theta = theta_next;
  }
};

}  // namespace

Trace fgm_theta_run(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg) {
  ThetaFgmState state;
  state.reset(p.set.contains(x0) ? x0 : p.set.project(x0));
  const double stop_tol = resolve_stop_tol(p, state.x, cfg);
  TraceRecorder recorder(p, cfg);

  Trace trace;
  trace.records.push_back(recorder.record(0, state.x, false));
  if (trace.records.back().grad_map_norm <= stop_tol) {
    trace.status = TerminalStatus::Converged;
    trace.final_x = state.x;
    return trace;
  }
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    state.step(p);
    TraceRecord rec = recorder.record(k, state.x, false);
    trace.records.push_back(rec);
    if (rec.grad_map_norm <= stop_tol) {
      trace.status = TerminalStatus::Converged;
      trace.final_x = state.x;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxIters;
  trace.final_x = state.x;
  return trace;
}

std::size_t rfgm_interval(double mu, double c) {
  if (!(mu > 0.0)) throw Error("rfgm: mu must be positive");
  if (!(c > 0.0 && c < 1.0)) throw Error("rfgm: c must lie in (0, 1)");
  return static_cast<std::size_t>(std::ceil(std::sqrt(4.0 / (c * mu))));
}

Trace rfgm_run(const StructuredProblem& p, const Vector& x0, const RfgmOptions& opt,
               const SolverConfig& cfg) {
  const double c = opt.c ? *opt.c : std::exp(-2.0);
  if (!(c > 0.0 && c < 1.0)) throw Error("rfgm: c must lie in (0, 1)");
  // Residual mode restarts exactly when the contraction test fires; the
  // other modes cap blocks at K iterations.
  const std::size_t interval =
      opt.interval_override ? *opt.interval_override
      : opt.mode == RestartMode::Residual
          ? std::numeric_limits<std::size_t>::max()
          : rfgm_interval(opt.mu, c);
  if (opt.mode == RestartMode::FunctionValue && !p.f_star) {
    throw Error("rfgm: function-value restarts need f*");
  }
  if (opt.mode == RestartMode::Residual &&
      p.g.kind != InnerFunction::Kind::ShiftedHalfSquaredNorm) {
    throw Error("rfgm: residual restarts need the 1/2 ||Ax-d||^2 objective");
  }

  ThetaFgmState state;
  state.reset(p.set.contains(x0) ? x0 : p.set.project(x0));
  const double stop_tol = resolve_stop_tol(p, state.x, cfg);
  TraceRecorder recorder(p, cfg);

  Trace trace;
  trace.records.push_back(recorder.record(0, state.x, false));
  if (trace.records.back().grad_map_norm <= stop_tol) {
    trace.status = TerminalStatus::Converged;
    trace.final_x = state.x;
    return trace;
  }

  double block_gap = p.f_star ? eval_value(p, state.x) - *p.f_star : 0.0;
  double block_residual =
      opt.mode == RestartMode::Residual ? embedding_residual(p, state.x) : 0.0;
  std::size_t block_len = 0;

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    state.step(p);
    ++block_len;

    bool restart = block_len >= interval;
    if (!restart && opt.mode == RestartMode::FunctionValue) {
      restart = eval_value(p, state.x) - *p.f_star <= c * block_gap;
    }
    if (!restart && opt.mode == RestartMode::Residual) {
      restart = embedding_residual(p, state.x) <= c * block_residual;
    }

    if (restart) {
      state.reset(state.x);
      block_len = 0;
      if (p.f_star) block_gap = eval_value(p, state.x) - *p.f_star;
      if (opt.mode == RestartMode::Residual) block_residual = embedding_residual(p, state.x);
    }

    TraceRecord rec = recorder.record(k, state.x, restart);
    trace.records.push_back(rec);
    if (rec.grad_map_norm <= stop_tol) {
      trace.status = TerminalStatus::Converged;
      trace.final_x = state.x;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxIters;
  trace.final_x = state.x;
  return trace;
}

Trace cyclic_cd_run(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg) {
  if (p.g.kind != InnerFunction::Kind::ShiftedHalfSquaredNorm) {
    throw Error("cyclic cd: objective must be 1/2 ||Ax - d||^2 (+ c^T x)");
  }
  const std::size_t n = p.dim();
  const std::size_t m = p.a.rows();

  // Column norms; every column must be nonzero for the exact 1-D solves.
  Vector col_norm_sq(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Vector col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = p.a(i, j);
    col_norm_sq[j] = norm_sq(col);
    if (col_norm_sq[j] <= 0.0) {
      throw Error("cyclic cd: column " + std::to_string(j) + " of A is zero");
    }
  }
  const double descent_l = *std::min_element(col_norm_sq.begin(), col_norm_sq.end());

  auto [lo, hi] = p.set.coordinate_bounds();

  Vector x = p.set.contains(x0) ? x0 : p.set.project(x0);
  const double stop_tol = resolve_stop_tol(p, x, cfg);
  TraceRecorder recorder(p, cfg);

  Trace trace;
  trace.records.push_back(recorder.record(0, x, false));
  if (trace.records.back().grad_map_norm <= stop_tol) {
    trace.status = TerminalStatus::Converged;
    trace.final_x = x;
    return trace;
  }

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    // Fresh residual each cycle keeps the incremental updates honest.
    Vector r = sub(matvec(p.a, x), p.g.target);
    const double f_start = 0.5 * norm_sq(r) + cdot(p.linear_term, x);
    Vector x_prev = x;

    for (std::size_t j = 0; j < n; ++j) {
      double dir = 0.0;
      for (std::size_t i = 0; i < m; ++i) dir += p.a(i, j) * r[i];
      dir += p.linear_term[j];
      double target = x[j] - dir / col_norm_sq[j];
      target = std::min(std::max(target, lo[j]), hi[j]);
      const double delta = target - x[j];
      if (delta != 0.0) {
        x[j] = target;
        for (std::size_t i = 0; i < m; ++i) r[i] += p.a(i, j) * delta;
      }
    }

    const double f_end = eval_value(p, x);
    const double step_sq = distance_sq(x, x_prev);
    TraceRecord rec = recorder.record(k, x, false);
    trace.records.push_back(rec);
    if (f_end > f_start - 0.5 * descent_l * step_sq + 1e-10 * (1.0 + std::abs(f_start))) {
      trace.status = TerminalStatus::DescentViolation;
      trace.final_x = x;
      return trace;
    }
    if (rec.grad_map_norm <= stop_tol) {
      trace.status = TerminalStatus::Converged;
      trace.final_x = x;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxIters;
  trace.final_x = x;
  return trace;
}

namespace {

std::string status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::MaxIters: return "max_iters";
    case TerminalStatus::Converged: return "converged";
    case TerminalStatus::DescentViolation: return "descent_violation";
  }
  return "?";
}

std::optional<TerminalStatus> status_from_name(const std::string& s) {
  if (s == "max_iters") return TerminalStatus::MaxIters;
  if (s == "converged") return TerminalStatus::Converged;
  if (s == "descent_violation") return TerminalStatus::DescentViolation;
  return std::nullopt;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& t) {
  out << "k,f_gap,dist_sq,grad_map_norm,restart\n";
  for (const auto& rec : t.records) {
    out << rec.k << ',';
    if (rec.f_gap) out << format_double(*rec.f_gap);
    out << ',';
    if (rec.dist_sq) out << format_double(*rec.dist_sq);
    out << ',' << format_double(rec.grad_map_norm) << ',' << (rec.restart ? 1 : 0) << '\n';
  }
  out << "# status=" << status_name(t.status) << '\n';
}

void write_trace_csv_file(const std::filesystem::path& path, const Trace& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_trace_csv(out, t);
}

Trace read_trace_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source_name + ":1: empty trace");
  if (line != "k,f_gap,dist_sq,grad_map_norm,restart") {
    throw ParseError(source_name + ":1: bad trace header");
  }
  Trace t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("# status=", 0) == 0) {
      const auto status = status_from_name(line.substr(9));
      if (!status) throw ParseError(source_name + ":" + std::to_string(lineno) + ": bad status");
      t.status = *status;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    // A trailing empty field is not produced by the writer; tolerate exactly
    // five fields.
    if (fields.size() != 5) {
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": expected 5 fields");
    }
    TraceRecord rec;
    try {
      rec.k = std::stoull(fields[0]);
      if (!fields[1].empty()) rec.f_gap = std::stod(fields[1]);
      if (!fields[2].empty()) rec.dist_sq = std::stod(fields[2]);
      rec.grad_map_norm = std::stod(fields[3]);
      rec.restart = fields[4] == "1";
    } catch (const std::exception&) {
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": malformed value");
    }
    t.records.push_back(rec);
  }
  return t;
}

Trace read_trace_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_trace_csv(in, path.string());
}

}  // namespace growthrates
