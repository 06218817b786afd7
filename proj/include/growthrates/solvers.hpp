#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "growthrates/problems.hpp"

namespace growthrates {

enum class TerminalStatus { MaxIters, Converged, DescentViolation };

struct TraceRecord {
  std::size_t k = 0;
  std::optional<double> f_gap;    // f(x^k) - f*, when f* is known
  std::optional<double> dist_sq;  // ||x^k - xbar^k||^2, when X* is computable
  double grad_map_norm = 0.0;
  bool restart = false;
};

struct Trace {
  std::vector<TraceRecord> records;
  TerminalStatus status = TerminalStatus::MaxIters;
  Vector final_x;
  // FGM with constant momentum only guarantees its rate when every iterate
  // shares one projection onto the optimal set (unconstrained g(Ax)).
  bool rate_guaranteed = true;
};

enum class StepMode { ConstantOneOverL, Interval };

struct SolverConfig {
  std::size_t max_iters = 1000;
  // Stop once ||g(x)|| falls below this; defaults to
  // 1e-10 * (1 + ||grad f(x0)||) when unset.
  std::optional<double> stop_grad_map_tol;
  StepMode step_mode = StepMode::ConstantOneOverL;
  double l_bar = 0.0;  // Interval mode uses alpha = 1/l_bar, l_bar >= L_f
  bool record_distances = true;
};

// One projected gradient step [x - alpha grad f(x)]_X; requires
// alpha in (0, 1/L_f].
Vector gm_step(const StructuredProblem& p, const Vector& x, double alpha);

Trace run_gm(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg);

// Constant momentum beta = (sqrt(L) - sqrt(kappa)) / (sqrt(L) + sqrt(kappa)).
double fgm_momentum(double l_f, double kappa);

// Fast gradient with constant momentum; kappa = L reproduces the gradient
// method exactly.
Trace fgm_const_run(const StructuredProblem& p, const Vector& x0, double kappa,
                    const SolverConfig& cfg);

// Momentum schedule theta_1 = 1, theta_{k+1} = (1 + sqrt(1 + 4 theta_k^2))/2,
// beta_k = (theta_k - 1)/theta_{k+1}; returns (theta_k, beta_k) for k >= 1.
std::pair<double, double> theta_schedule(std::size_t k);

Trace fgm_theta_run(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg);

enum class RestartMode {
  FixedInterval,   // restart every K iterations
  FunctionValue,   // restart early once f - f* <= c (f_block_start - f*); needs f*
  Residual         // restart exactly when ||Ax-d|| <= c ||Ax_block_start - d||
};

struct RfgmOptions {
  double mu = 0.0;            // condition number kappa_f / L_f (sizes K; unused in Residual mode)
  std::optional<double> c;    // block contraction target; defaults to e^-2
  RestartMode mode = RestartMode::FixedInterval;
  std::optional<std::size_t> interval_override;  // replaces K = ceil(sqrt(4/(c mu)))
};

std::size_t rfgm_interval(double mu, double c);

// Restarted theta-schedule fast gradient: blocks of K iterations with x, y
// and the schedule reset at each boundary; restart records are flagged.
Trace rfgm_run(const StructuredProblem& p, const Vector& x0, const RfgmOptions& opt,
               const SolverConfig& cfg);

// Exact cyclic coordinate descent on f(x) = 1/2 ||Ax - d||^2 + c^T x over a
// separable set. One trace iteration is one full cycle; the per-cycle
// sufficient-decrease condition with L = min_i ||A_i||^2 is asserted and a
// violation terminates the run with DescentViolation.
Trace cyclic_cd_run(const StructuredProblem& p, const Vector& x0, const SolverConfig& cfg);

// Trace CSV: header k,f_gap,dist_sq,grad_map_norm,restart; 17 significant
// digits; absent optional columns are empty cells. parse(emit(t)) == t.
void write_trace_csv(std::ostream& out, const Trace& t);
void write_trace_csv_file(const std::filesystem::path& path, const Trace& t);
Trace read_trace_csv(std::istream& in, const std::string& source_name = "<stream>");
Trace read_trace_csv_file(const std::filesystem::path& path);

}  // namespace growthrates
