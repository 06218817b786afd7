#include "growthrates/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "growthrates/classes.hpp"
#include "growthrates/matrix_io.hpp"
#include "growthrates/rates.hpp"

namespace growthrates::cli {

namespace fs = std::filesystem;

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("GROWTHRATES_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ParseError("GROWTHRATES_SEED is not an unsigned integer");
  }
}

void write_key_values(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

// --- problem loading -------------------------------------------------------

struct LoadedProblem {
  StructuredProblem problem;
  std::optional<Vector> known_solution;
  std::string description;
};

LoadedProblem load_lp_dir(const fs::path& dir) {
  const Matrix e = read_matrix_file(dir / "E.txt");
  const Vector b = read_vector_file(dir / "b.txt");
  const Vector c = read_vector_file(dir / "c.txt");
  LoadedProblem lp{build_lp_embedding(e, b, c), std::nullopt, "lp-embedding"};
  const fs::path sol = dir / "solution.txt";
  if (fs::exists(sol)) lp.known_solution = read_vector_file(sol);
  return lp;
}

LoadedProblem load_problem(const std::string& lp_dir, const std::string& q_file,
                           const std::string& qlin_file, const std::string& ls_a_file,
                           const std::string& ls_b_file) {
  if (!lp_dir.empty()) return load_lp_dir(lp_dir);
  if (!q_file.empty()) {
    const Matrix q = read_matrix_file(q_file);
    const Vector qlin = read_vector_file(qlin_file);
    return {qp_problem(q, qlin), std::nullopt, "qp"};
  }
  if (!ls_a_file.empty()) {
    const Matrix a = read_matrix_file(ls_a_file);
    const Vector b = read_vector_file(ls_b_file);
    return {least_squares_problem(a, b), std::nullopt, "least-squares"};
  }
  throw ParseError("no problem given: use --lp-dir, --Q/--q, or --A/--b");
}

// mu used to size restart intervals when the exact constrained constant is
// out of reach: the equality-only value sigma_g sigma_min(A)^2 / L_f.
double default_mu(const StructuredProblem& p) {
  if (p.set.kind() == SetKind::WholeSpace && !p.has_linear_term()) {
    return structured_constants(p).mu_f;
  }
  const double smin = sigma_min_nonzero(p.a);
  return p.g.sigma_g * smin * smin / p.l_f;
}

RestartMode restart_mode_from_name(const std::string& name) {
  if (name == "fixed") return RestartMode::FixedInterval;
  if (name == "fvalue") return RestartMode::FunctionValue;
  if (name == "residual") return RestartMode::Residual;
  throw ParseError("unknown restart mode: " + name);
}

// --- gen-lp ----------------------------------------------------------------

struct GenLpArgs {
  std::size_t m = 0, n = 0;
  double density = 1.0;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int cmd_gen_lp(const GenLpArgs& args, std::ostream& out) {
  const LpData lp = gen_random_lp(args.m, args.n, args.density, args.seed);
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  write_matrix_file(dir / "E.txt", lp.e);
  write_vector_file(dir / "b.txt", lp.b);
  write_vector_file(dir / "c.txt", lp.c);
  write_vector_file(dir / "solution.txt", embed_solution(lp));
  std::ofstream meta(dir / "meta.txt");
  if (!meta) throw Error("cannot write " + (dir / "meta.txt").string());
  write_key_values(meta, {{"seed", std::to_string(lp.seed)},
                          {"m", std::to_string(args.m)},
                          {"N", std::to_string(args.n)},
                          {"density", format_double(lp.density)}});
  out << "wrote LP instance to " << dir.string() << '\n';
  return kExitPass;
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string lp_dir, q_file, qlin_file, ls_a_file, ls_b_file;
  std::string algo = "gm";
  std::size_t max_iters = 10000;
  std::optional<double> tol;
  std::optional<double> kappa;
  std::optional<double> mu;
  std::optional<double> c;
  std::string restart = "fixed";
  std::string x0 = "zero";  // zero | solution | a file path
  std::string trace_file, summary_file;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  LoadedProblem loaded =
      load_problem(args.lp_dir, args.q_file, args.qlin_file, args.ls_a_file, args.ls_b_file);
  const StructuredProblem& p = loaded.problem;

  Vector x0(p.dim(), 0.0);
  if (args.x0 == "solution") {
    if (!loaded.known_solution) throw ParseError("--x0 solution needs a solution.txt next to the problem");
    x0 = *loaded.known_solution;
  } else if (args.x0 != "zero") {
    x0 = read_vector_file(args.x0);
  }

  SolverConfig cfg;
  cfg.max_iters = args.max_iters;
  cfg.stop_grad_map_tol = args.tol;
  // Exact distances are recorded only when the optimal set is computable at
  // desk scale; the recorder drops the column otherwise.
  cfg.record_distances = true;

  const auto t0 = std::chrono::steady_clock::now();
  Trace trace;
  if (args.algo == "gm") {
    trace = run_gm(p, x0, cfg);
  } else if (args.algo == "fgm") {
    const double kappa = args.kappa ? *args.kappa : default_mu(p) * p.l_f;
    trace = fgm_const_run(p, x0, kappa, cfg);
  } else if (args.algo == "fgm-theta") {
    trace = fgm_theta_run(p, x0, cfg);
  } else if (args.algo == "rfgm") {
    RfgmOptions opt;
    opt.mu = args.mu ? *args.mu : default_mu(p);
    opt.c = args.c;
    opt.mode = restart_mode_from_name(args.restart);
    trace = rfgm_run(p, x0, opt, cfg);
  } else if (args.algo == "cd") {
    trace = cyclic_cd_run(p, x0, cfg);
  } else {
    throw ParseError("unknown algorithm: " + args.algo);
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

  if (!args.trace_file.empty()) write_trace_csv_file(args.trace_file, trace);

  std::vector<std::pair<std::string, std::string>> summary;
  summary.emplace_back("problem", loaded.description);
  summary.emplace_back("algorithm", args.algo);
  summary.emplace_back("iterations", std::to_string(trace.records.back().k));
  summary.emplace_back("status", trace.status == TerminalStatus::Converged     ? "converged"
                                 : trace.status == TerminalStatus::MaxIters    ? "max_iters"
                                                                               : "descent_violation");
  if (p.g.kind == InnerFunction::Kind::ShiftedHalfSquaredNorm) {
    summary.emplace_back("final_residual", format_double(embedding_residual(p, trace.final_x)));
  }
  if (trace.records.back().f_gap) {
    summary.emplace_back("final_f_gap", format_double(*trace.records.back().f_gap));
  }
  summary.emplace_back("grad_map_norm", format_double(trace.records.back().grad_map_norm));
  summary.emplace_back("rate_guaranteed", trace.rate_guaranteed ? "1" : "0");
  summary.emplace_back("wall_time_s", format_double(wall.count()));

  if (!args.summary_file.empty()) {
    std::ofstream sf(args.summary_file);
    if (!sf) throw Error("cannot write " + args.summary_file);
    write_key_values(sf, summary);
  }
  write_key_values(out, summary);
  if (trace.status == TerminalStatus::DescentViolation) return kExitViolation;
  return kExitPass;
}

// --- certify ---------------------------------------------------------------

struct CertifyArgs {
  std::string lp_dir, q_file, qlin_file, ls_a_file, ls_b_file;
  std::string kind = "func-growth";
  std::optional<double> kappa;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::optional<double> sublevel;
  std::string out_file;
};

int cmd_certify(const CertifyArgs& args, std::ostream& out) {
  LoadedProblem loaded =
      load_problem(args.lp_dir, args.q_file, args.qlin_file, args.ls_a_file, args.ls_b_file);
  const auto kind = condition_from_name(args.kind);
  if (!kind) throw ParseError("unknown condition kind: " + args.kind);

  double kappa;
  if (args.kappa) {
    kappa = *args.kappa;
  } else {
    kappa = structured_constants(loaded.problem, args.sublevel).kappa_f;
  }

  const ClassCertificate cert =
      check_condition(*kind, loaded.problem, kappa, args.samples, args.seed, args.sublevel);

  std::vector<std::pair<std::string, std::string>> kv = {
      {"kind", condition_name(cert.kind)},
      {"kappa_tested", format_double(cert.kappa_tested)},
      {"samples", std::to_string(cert.num_samples)},
      {"worst_violation", format_double(cert.worst_violation)},
      {"kappa_empirical", format_double(cert.kappa_empirical)},
      {"seed", std::to_string(cert.seed)},
  };
  if (!args.out_file.empty()) {
    std::ofstream f(args.out_file);
    if (!f) throw Error("cannot write " + args.out_file);
    write_key_values(f, kv);
  }
  write_key_values(out, kv);
  return cert.passed() ? kExitPass : kExitViolation;
}

// --- rate-check ------------------------------------------------------------

struct RateCheckArgs {
  std::string trace_file;
  std::string method = "gm-qs";
  double mu = 0.0;
  double l_f = 0.0;
  std::optional<double> dist0_sq, f_gap0;
  std::string metric = "f_gap";
  double tol = 1e-9;
  std::optional<double> fdm_l, fdm_beta, fdm_lbar;
  std::string margins_csv, report_file;
};

int cmd_rate_check(const RateCheckArgs& args, std::ostream& out) {
  const Trace trace = read_trace_csv_file(args.trace_file);
  const auto method = rate_method_from_name(args.method);
  if (!method) throw ParseError("unknown rate method: " + args.method);
  const TraceMetric metric = args.metric == "dist_sq" ? TraceMetric::DistSq : TraceMetric::FGap;
  if (args.metric != "dist_sq" && args.metric != "f_gap") {
    throw ParseError("unknown metric: " + args.metric);
  }

  RateModel model;
  model.method = *method;
  model.mu = args.mu;
  model.l_f = args.l_f;
  model.dist0_sq = args.dist0_sq;
  model.f_gap0 = args.f_gap0;
  if (args.fdm_l || args.fdm_beta || args.fdm_lbar) {
    model.fdm = FdmParams{args.fdm_l.value_or(0.0), args.fdm_beta.value_or(0.0),
                          args.fdm_lbar.value_or(0.0)};
  }
  // Initial conditions default to the trace's k = 0 record.
  if (!trace.records.empty() && trace.records.front().k == 0) {
    if (!model.f_gap0) model.f_gap0 = trace.records.front().f_gap;
    if (!model.dist0_sq) model.dist0_sq = trace.records.front().dist_sq;
  }

  const RateReport report = verify_bound(trace, model, metric, args.tol);

  if (!args.margins_csv.empty()) {
    std::ofstream mc(args.margins_csv);
    if (!mc) throw Error("cannot write " + args.margins_csv);
    mc << "k,margin\n";
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
      mc << report.ks[i] << ',' << format_double(report.margins[i]) << '\n';
    }
  }

  std::vector<std::pair<std::string, std::string>> kv = {
      {"method", args.method},
      {"metric", args.metric},
      {"verdict", report.pass ? "pass" : "fail"},
      {"worst_margin", format_double(report.worst_margin)},
      {"empirical_factor", format_double(report.empirical_factor)},
      {"theoretical_factor", format_double(report.theoretical_factor)},
  };
  if (!args.report_file.empty()) {
    std::ofstream rf(args.report_file);
    if (!rf) throw Error("cannot write " + args.report_file);
    write_key_values(rf, kv);
  }
  write_key_values(out, kv);
  return report.pass ? kExitPass : kExitViolation;
}

// --- bench -----------------------------------------------------------------

std::string config_get(const std::map<std::string, std::string>& cfg, const std::string& key,
                       const std::string& fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

double config_get_double(const std::map<std::string, std::string>& cfg, const std::string& key,
                         double fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("config key " + key + ": not a number: " + it->second);
  }
}

std::size_t config_get_size(const std::map<std::string, std::string>& cfg, const std::string& key,
                            std::size_t fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ParseError("config key " + key + ": not an unsigned integer: " + it->second);
  }
}

int cmd_bench(const std::string& config_path, std::ostream& out) {
  std::ifstream cf(config_path);
  if (!cf) throw ParseError("cannot open config " + config_path);
  auto cfg = parse_config(cf, config_path);

  // Problem.
  LoadedProblem loaded{StructuredProblem{}, std::nullopt, ""};
  std::uint64_t seed = config_get_size(cfg, "problem.seed", 1);
  if (const auto env = env_seed()) seed = *env;
  if (config_get(cfg, "problem.source", "generate") == "files") {
    loaded = load_lp_dir(config_get(cfg, "problem.dir", "."));
  } else {
    const std::size_t m = config_get_size(cfg, "problem.m", 20);
    const std::size_t n = config_get_size(cfg, "problem.N", 30);
    const double density = config_get_double(cfg, "problem.density", 1.0);
    const LpData lp = gen_random_lp(m, n, density, seed);
    loaded = {build_lp_embedding(lp.e, lp.b, lp.c), embed_solution(lp), "lp-embedding"};
  }
  const StructuredProblem& p = loaded.problem;
  if (!p.f_star) throw Error("bench: embedding carries no optimal value");

  SolverConfig base;
  base.max_iters = config_get_size(cfg, "max_iters", 2000);
  base.stop_grad_map_tol = 0.0;  // run out the full horizon so columns align
  base.record_distances = false;

  const Vector x0(p.dim(), 0.0);

  std::vector<std::string> algos;
  {
    std::istringstream ss(config_get(cfg, "algos", "gm,rfgm,cd"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) algos.push_back(item);
    }
    if (algos.empty()) throw ParseError("config: empty algos list");
  }

  std::vector<Trace> traces;
  for (const auto& algo : algos) {
    SolverConfig cfg_run = base;
    if (algo == "gm") {
      if (config_get(cfg, "gm.step", "constant") == "interval") {
        cfg_run.step_mode = StepMode::Interval;
        cfg_run.l_bar = config_get_double(cfg, "gm.lbar", p.l_f);
      }
      traces.push_back(run_gm(p, x0, cfg_run));
    } else if (algo == "fgm") {
      traces.push_back(fgm_theta_run(p, x0, cfg_run));
    } else if (algo == "rfgm") {
      RfgmOptions opt;
      opt.mu = config_get_double(cfg, "rfgm.mu", default_mu(p));
      opt.c = config_get_double(cfg, "rfgm.c", std::exp(-2.0));
      opt.mode = restart_mode_from_name(config_get(cfg, "rfgm.restart", "fixed"));
      traces.push_back(rfgm_run(p, x0, opt, cfg_run));
    } else if (algo == "cd") {
      traces.push_back(cyclic_cd_run(p, x0, cfg_run));
    } else {
      throw ParseError("config: unknown algorithm " + algo);
    }
  }

  const fs::path out_dir(config_get(cfg, "out.dir", "bench-out"));
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < algos.size(); ++i) {
    write_trace_csv_file(out_dir / (algos[i] + "_trace.csv"), traces[i]);
  }

  // Sublinear envelopes in residual units, anchored at R = ||x0 - x_sol||.
  double r_sq = 0.0;
  if (loaded.known_solution) {
    r_sq = distance_sq(x0, *loaded.known_solution);
  } else {
    const auto projector = OptimalSetProjector::build(p);
    if (projector) r_sq = projector->distance_sq(x0);
  }

  std::ofstream comparison(out_dir / "comparison.csv");
  if (!comparison) throw Error("cannot write comparison.csv");
  comparison << "k";
  for (const auto& algo : algos) comparison << ',' << algo;
  comparison << ",env_gm,env_fgm\n";
  std::size_t rows = 0;
  for (const auto& t : traces) rows = std::max(rows, t.records.size());
  for (std::size_t r = 0; r < rows; ++r) {
    comparison << r;
    for (const auto& t : traces) {
      comparison << ',';
      if (r < t.records.size() && t.records[r].f_gap) {
        comparison << format_double(std::sqrt(2.0 * std::max(0.0, *t.records[r].f_gap)));
      }
    }
    if (r >= 1 && r_sq > 0.0) {
      const double kd = static_cast<double>(r);
      comparison << ',' << format_double(std::sqrt(p.l_f * r_sq / kd));
      comparison << ',' << format_double(2.0 * std::sqrt(p.l_f * r_sq) / (kd + 1.0));
    } else {
      comparison << ",,";
    }
    comparison << '\n';
  }
  out << "wrote " << (out_dir / "comparison.csv").string() << '\n';
  return kExitPass;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source_name) {
  std::map<std::string, std::string> cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto key_end = key.find_last_not_of(" \t");
    key = key.substr(0, key_end == std::string::npos ? 0 : key_end + 1);
    const auto value_start = value.find_first_not_of(" \t");
    value = value_start == std::string::npos ? "" : value.substr(value_start);
    if (key.empty()) {
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": empty key");
    }
    cfg[key] = value;
  }
  return cfg;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"first-order solvers, condition certificates, and rate checks"};
  app.require_subcommand(1);

  GenLpArgs gen_args;
  auto* gen = app.add_subcommand("gen-lp", "generate a random solvable LP (E, b, c) with its solution");
  gen->add_option("--m", gen_args.m, "rows of E")->required();
  gen->add_option("--N", gen_args.n, "columns of E")->required();
  gen->add_option("--density", gen_args.density, "fraction of nonzero entries in E");
  auto* gen_seed = gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "run a solver on an LP embedding or a QP");
  solve->add_option("--lp-dir", solve_args.lp_dir, "directory with E.txt, b.txt, c.txt");
  solve->add_option("--Q", solve_args.q_file, "QP matrix file");
  solve->add_option("--q", solve_args.qlin_file, "QP linear term file");
  solve->add_option("--A", solve_args.ls_a_file, "least-squares matrix file");
  solve->add_option("--b", solve_args.ls_b_file, "least-squares offset file");
  solve->add_option("--algo", solve_args.algo, "gm | fgm | fgm-theta | rfgm | cd");
  solve->add_option("--max-iters", solve_args.max_iters, "iteration cap");
  solve->add_option("--tol", solve_args.tol, "gradient-mapping stop tolerance");
  solve->add_option("--kappa", solve_args.kappa, "momentum constant for fgm");
  solve->add_option("--mu", solve_args.mu, "condition number for rfgm");
  solve->add_option("--c", solve_args.c, "block contraction target for rfgm");
  solve->add_option("--restart-mode", solve_args.restart, "fixed | fvalue | residual");
  solve->add_flag_callback(
      "--restart-on-residual", [&solve_args]() { solve_args.restart = "residual"; },
      "shorthand for --restart-mode residual");
  solve->add_option("--x0", solve_args.x0, "zero | solution | vector file");
  solve->add_option("--trace", solve_args.trace_file, "trace CSV output");
  solve->add_option("--summary", solve_args.summary_file, "summary output");

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand("certify", "sample-certify a relaxed strong-convexity condition");
  certify->add_option("--lp-dir", certify_args.lp_dir, "directory with E.txt, b.txt, c.txt");
  certify->add_option("--Q", certify_args.q_file, "QP matrix file");
  certify->add_option("--q", certify_args.qlin_file, "QP linear term file");
  certify->add_option("--A", certify_args.ls_a_file, "least-squares matrix file");
  certify->add_option("--b", certify_args.ls_b_file, "least-squares offset file");
  certify->add_option("--kind", certify_args.kind,
                      "quasi-strong | under-approx | grad-growth | func-growth | error-bound");
  certify->add_option("--kappa", certify_args.kappa, "constant to certify (default: structural)");
  certify->add_option("--samples", certify_args.samples, "number of sampled points");
  auto* certify_seed = certify->add_option("--seed", certify_args.seed, "sampling seed");
  certify->add_option("--sublevel", certify_args.sublevel, "restrict samples to f - f* <= M");
  certify->add_option("--out", certify_args.out_file, "certificate output file");

  RateCheckArgs rate_args;
  auto* rate = app.add_subcommand("rate-check", "verify a theoretical bound against a trace CSV");
  rate->add_option("--trace", rate_args.trace_file, "trace CSV")->required();
  rate->add_option("--method", rate_args.method, "gm-qs | gm-f | fgm-const | fgm-theta | rfgm | fdm");
  rate->add_option("--mu", rate_args.mu, "condition number")->required();
  rate->add_option("--lf", rate_args.l_f, "gradient Lipschitz constant")->required();
  rate->add_option("--dist0-sq", rate_args.dist0_sq, "initial squared distance (default: trace k=0)");
  rate->add_option("--fgap0", rate_args.f_gap0, "initial f-gap (default: trace k=0)");
  rate->add_option("--metric", rate_args.metric, "f_gap | dist_sq");
  rate->add_option("--tol", rate_args.tol, "violation tolerance (relative to the bound)");
  rate->add_option("--fdm-l", rate_args.fdm_l, "FDM sufficient-decrease constant");
  rate->add_option("--fdm-beta", rate_args.fdm_beta, "FDM perturbation factor");
  rate->add_option("--fdm-lbar", rate_args.fdm_lbar, "FDM step bound");
  rate->add_option("--margins-csv", rate_args.margins_csv, "per-k margins output");
  rate->add_option("--report", rate_args.report_file, "report output file");

  std::string bench_config;
  auto* bench = app.add_subcommand("bench", "run configured algorithms on one problem; emit aligned residuals");
  bench->add_option("--config", bench_config, "key=value configuration file")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (const auto env = env_seed(); env && gen_seed->count() == 0) gen_args.seed = *env;
      return cmd_gen_lp(gen_args, out);
    }
    if (solve->parsed()) return cmd_solve(solve_args, out);
    if (certify->parsed()) {
      if (const auto env = env_seed(); env && certify_seed->count() == 0) certify_args.seed = *env;
      return cmd_certify(certify_args, out);
    }
    if (rate->parsed()) return cmd_rate_check(rate_args, out);
    if (bench->parsed()) return cmd_bench(bench_config, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace growthrates::cli
