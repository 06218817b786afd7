#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "growthrates/classes.hpp"
#include "growthrates/rates.hpp"
#include "growthrates/solvers.hpp"

namespace py = pybind11;
using namespace growthrates;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  Vector entries(arr.data(), arr.data() + rows * cols);
  return Matrix(rows, cols, std::move(entries));
}

Vector to_vector(const DoubleArray& arr) {
  if (arr.ndim() != 1) throw DimensionError("expected a 1-D array");
  return Vector(arr.data(), arr.data() + arr.shape(0));
}

py::array_t<double> from_matrix(const Matrix& m) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(m.rows()),
                                       static_cast<py::ssize_t>(m.cols())};
  const std::vector<py::ssize_t> strides{
      static_cast<py::ssize_t>(m.cols() * sizeof(double)),
      static_cast<py::ssize_t>(sizeof(double))};
  py::array_t<double> out(shape, strides);
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_vector(const Vector& v) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(v.size())};
  const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(double))};
  py::array_t<double> out(shape, strides);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ConditionKind parse_condition(const std::string& name) {
  const auto kind = condition_from_name(name);
  if (!kind) throw Error("unknown condition kind: " + name);
  return *kind;
}

RateMethod parse_method(const std::string& name) {
  const auto method = rate_method_from_name(name);
  if (!method) throw Error("unknown rate method: " + name);
  return *method;
}

RateModel build_model(const std::string& method, double mu, double l_f,
                      std::optional<double> dist0_sq, std::optional<double> f_gap0,
                      std::optional<double> fdm_l, std::optional<double> fdm_beta,
                      std::optional<double> fdm_lbar) {
  RateModel m;
  m.method = parse_method(method);
  m.mu = mu;
  m.l_f = l_f;
  m.dist0_sq = dist0_sq;
  m.f_gap0 = f_gap0;
  if (fdm_l || fdm_beta || fdm_lbar) {
    m.fdm = FdmParams{fdm_l.value_or(0.0), fdm_beta.value_or(0.0), fdm_lbar.value_or(0.0)};
  }
  return m;
}

SolverConfig build_config(std::size_t max_iters, std::optional<double> tol, bool record_distances) {
  SolverConfig cfg;
  cfg.max_iters = max_iters;
  cfg.stop_grad_map_tol = tol;
  cfg.record_distances = record_distances;
  return cfg;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "first-order solvers with linear rates under relaxed strong convexity";

  py::register_exception<Error>(m, "GrowthratesError");

  // --- linear algebra ---
  m.def("spectral_norm", [](const DoubleArray& a) { return spectral_norm(to_matrix(a)); },
        py::arg("a"), "Largest singular value.");
  m.def("sigma_min_nonzero",
        [](const DoubleArray& a) { return sigma_min_nonzero(to_matrix(a)); }, py::arg("a"),
        "Smallest singular value above the rank threshold.");
  m.def("singular_values",
        [](const DoubleArray& a) { return from_vector(singular_values(to_matrix(a))); },
        py::arg("a"));
  m.def("project_affine",
        [](const DoubleArray& x, const DoubleArray& a, const DoubleArray& t) {
          return from_vector(project_affine(to_vector(x), to_matrix(a), to_vector(t)));
        },
        py::arg("x"), py::arg("a"), py::arg("t"),
        "Euclidean projection of x onto {z : A z = t}.");
  m.def("project_polyhedron",
        [](const DoubleArray& c, const DoubleArray& d, const DoubleArray& a_eq,
           const DoubleArray& b_eq, const DoubleArray& x) {
          return from_vector(project_polyhedron(to_matrix(c), to_vector(d), to_matrix(a_eq),
                                                to_vector(b_eq), to_vector(x)));
        },
        py::arg("c"), py::arg("d"), py::arg("a_eq"), py::arg("b_eq"), py::arg("x"));
  m.def("hoffman_theta",
        [](const DoubleArray& a, std::optional<DoubleArray> c) {
          if (!c) return hoffman_theta(to_matrix(a));
          const Matrix cm = to_matrix(*c);
          return hoffman_theta(to_matrix(a), &cm);
        },
        py::arg("a"), py::arg("c") = py::none());

  // --- problems ---
  py::class_<StructuredProblem>(m, "Problem")
      .def_property_readonly("dim", &StructuredProblem::dim)
      .def_property_readonly("l_f", [](const StructuredProblem& p) { return p.l_f; })
      .def_property_readonly("f_star",
                             [](const StructuredProblem& p) { return p.f_star; })
      .def_property_readonly("a", [](const StructuredProblem& p) { return from_matrix(p.a); })
      .def("value", [](const StructuredProblem& p, const DoubleArray& x) {
        return eval_value(p, to_vector(x));
      })
      .def("gradient",
           [](const StructuredProblem& p, const DoubleArray& x) {
             return from_vector(eval_grad(p, to_vector(x)).second);
           })
      .def("gradient_map",
           [](const StructuredProblem& p, const DoubleArray& x) {
             return from_vector(gradient_map(p, to_vector(x)));
           })
      .def("project",
           [](const StructuredProblem& p, const DoubleArray& x) {
             return from_vector(p.set.project(to_vector(x)));
           })
      .def("residual",
           [](const StructuredProblem& p, const DoubleArray& x) {
             return embedding_residual(p, to_vector(x));
           })
      .def("distance_sq_to_optimal",
           [](const StructuredProblem& p, const DoubleArray& x) -> std::optional<double> {
             const auto proj = OptimalSetProjector::build(p);
             if (!proj) return std::nullopt;
             return proj->distance_sq(to_vector(x));
           })
      .def("constants", [](const StructuredProblem& p, std::optional<double> sublevel) {
        const ProblemConstants c = structured_constants(p, sublevel);
        py::dict out;
        out["l_f"] = c.l_f;
        out["kappa_f"] = c.kappa_f;
        out["mu_f"] = c.mu_f;
        out["hoffman_theta"] = c.hoffman_theta;
        out["class_tag"] = c.class_tag == ClassTag::QuasiStrong  ? "quasi-strong"
                           : c.class_tag == ClassTag::GradGrowth ? "grad-growth"
                                                                 : "func-growth";
        return out;
      }, py::arg("sublevel") = py::none());

  m.def("least_squares_problem",
        [](const DoubleArray& a, const DoubleArray& b) {
          return least_squares_problem(to_matrix(a), to_vector(b));
        },
        py::arg("a"), py::arg("b"), "0.5 ||A x + b||^2 over the whole space.");
  m.def("qp_problem",
        [](const DoubleArray& q, const DoubleArray& q_lin) {
          return qp_problem(to_matrix(q), to_vector(q_lin));
        },
        py::arg("q"), py::arg("q_lin"),
        "Symmetric PSD system Q x + q = 0 as a zero-residual quadratic.");
  m.def("lp_embedding",
        [](const DoubleArray& e, const DoubleArray& b, const DoubleArray& c) {
          return build_lp_embedding(to_matrix(e), to_vector(b), to_vector(c));
        },
        py::arg("e"), py::arg("b"), py::arg("c"),
        "Homogeneous self-dual embedding of the LP min <c,u> s.t. Eu=b, u>=0.");
  m.def("gen_random_lp",
        [](std::size_t m_rows, std::size_t n_cols, double density, std::uint64_t seed) {
          const LpData lp = gen_random_lp(m_rows, n_cols, density, seed);
          py::dict out;
          out["e"] = from_matrix(lp.e);
          out["b"] = from_vector(lp.b);
          out["c"] = from_vector(lp.c);
          out["u_star"] = from_vector(lp.u_star);
          out["v_star"] = from_vector(lp.v_star);
          out["s_star"] = from_vector(lp.s_star);
          out["x_embedded"] = from_vector(embed_solution(lp));
          return out;
        },
        py::arg("m"), py::arg("n"), py::arg("density") = 1.0, py::arg("seed") = 1);

  // --- traces and solvers ---
  py::class_<Trace>(m, "Trace")
      .def_property_readonly("k",
                             [](const Trace& t) {
                               std::vector<std::size_t> ks;
                               for (const auto& r : t.records) ks.push_back(r.k);
                               return ks;
                             })
      .def_property_readonly("f_gap",
                             [](const Trace& t) {
                               Vector v;
                               for (const auto& r : t.records) v.push_back(r.f_gap.value_or(kNaN));
                               return from_vector(v);
                             })
      .def_property_readonly("dist_sq",
                             [](const Trace& t) {
                               Vector v;
                               for (const auto& r : t.records) v.push_back(r.dist_sq.value_or(kNaN));
                               return from_vector(v);
                             })
      .def_property_readonly("grad_map_norm",
                             [](const Trace& t) {
                               Vector v;
                               for (const auto& r : t.records) v.push_back(r.grad_map_norm);
                               return from_vector(v);
                             })
      .def_property_readonly("restarts",
                             [](const Trace& t) {
                               std::vector<std::size_t> ks;
                               for (const auto& r : t.records)
                                 if (r.restart) ks.push_back(r.k);
                               return ks;
                             })
      .def_property_readonly("status",
                             [](const Trace& t) {
                               switch (t.status) {
                                 case TerminalStatus::Converged: return "converged";
                                 case TerminalStatus::MaxIters: return "max_iters";
                                 case TerminalStatus::DescentViolation: return "descent_violation";
                               }
                               return "?";
                             })
      .def_property_readonly("rate_guaranteed", [](const Trace& t) { return t.rate_guaranteed; })
      .def_property_readonly("final_x", [](const Trace& t) { return from_vector(t.final_x); })
      .def("to_csv", [](const Trace& t, const std::string& path) { write_trace_csv_file(path, t); });

  m.def("read_trace_csv", [](const std::string& path) { return read_trace_csv_file(path); });

  m.def("run_gm",
        [](const StructuredProblem& p, const DoubleArray& x0, std::size_t max_iters,
           std::optional<double> tol, bool record_distances) {
          return run_gm(p, to_vector(x0), build_config(max_iters, tol, record_distances));
        },
        py::arg("p"), py::arg("x0"), py::arg("max_iters") = 1000, py::arg("tol") = py::none(),
        py::arg("record_distances") = true);
  m.def("run_fgm_const",
        [](const StructuredProblem& p, const DoubleArray& x0, double kappa, std::size_t max_iters,
           std::optional<double> tol, bool record_distances) {
          return fgm_const_run(p, to_vector(x0), kappa, build_config(max_iters, tol, record_distances));
        },
        py::arg("p"), py::arg("x0"), py::arg("kappa"), py::arg("max_iters") = 1000,
        py::arg("tol") = py::none(), py::arg("record_distances") = true);
  m.def("run_fgm_theta",
        [](const StructuredProblem& p, const DoubleArray& x0, std::size_t max_iters,
           std::optional<double> tol, bool record_distances) {
          return fgm_theta_run(p, to_vector(x0), build_config(max_iters, tol, record_distances));
        },
        py::arg("p"), py::arg("x0"), py::arg("max_iters") = 1000, py::arg("tol") = py::none(),
        py::arg("record_distances") = true);
  m.def("run_rfgm",
        [](const StructuredProblem& p, const DoubleArray& x0, double mu, std::optional<double> c,
           const std::string& restart, std::size_t max_iters, std::optional<double> tol,
           bool record_distances) {
          RfgmOptions opt;
          opt.mu = mu;
          opt.c = c;
          if (restart == "fixed") opt.mode = RestartMode::FixedInterval;
          else if (restart == "fvalue") opt.mode = RestartMode::FunctionValue;
          else if (restart == "residual") opt.mode = RestartMode::Residual;
          else throw Error("unknown restart mode: " + restart);
          return rfgm_run(p, to_vector(x0), opt, build_config(max_iters, tol, record_distances));
        },
        py::arg("p"), py::arg("x0"), py::arg("mu"), py::arg("c") = py::none(),
        py::arg("restart") = "fixed", py::arg("max_iters") = 1000, py::arg("tol") = py::none(),
        py::arg("record_distances") = true);
  m.def("run_cyclic_cd",
        [](const StructuredProblem& p, const DoubleArray& x0, std::size_t max_iters,
           std::optional<double> tol, bool record_distances) {
          return cyclic_cd_run(p, to_vector(x0), build_config(max_iters, tol, record_distances));
        },
        py::arg("p"), py::arg("x0"), py::arg("max_iters") = 1000, py::arg("tol") = py::none(),
        py::arg("record_distances") = true);
  m.def("theta_schedule", &theta_schedule, py::arg("k"));
  m.def("rfgm_interval", &rfgm_interval, py::arg("mu"), py::arg("c"));

  // --- condition certificates ---
  py::class_<ClassCertificate>(m, "Certificate")
      .def_property_readonly("kind",
                             [](const ClassCertificate& c) { return condition_name(c.kind); })
      .def_readonly("kappa_tested", &ClassCertificate::kappa_tested)
      .def_readonly("num_samples", &ClassCertificate::num_samples)
      .def_readonly("worst_violation", &ClassCertificate::worst_violation)
      .def_readonly("kappa_empirical", &ClassCertificate::kappa_empirical)
      .def_readonly("seed", &ClassCertificate::seed)
      .def("passed", &ClassCertificate::passed);

  m.def("check_condition",
        [](const std::string& kind, const StructuredProblem& p, double kappa, std::size_t samples,
           std::uint64_t seed, std::optional<double> sublevel) {
          return check_condition(parse_condition(kind), p, kappa, samples, seed, sublevel);
        },
        py::arg("kind"), py::arg("p"), py::arg("kappa"), py::arg("samples") = 1000,
        py::arg("seed") = 1, py::arg("sublevel") = py::none());
  m.def("convert_constant",
        [](const std::string& from, const std::string& to, double kappa, double l_f) {
          return convert_constant(parse_condition(from), parse_condition(to), kappa, l_f);
        },
        py::arg("from_kind"), py::arg("to_kind"), py::arg("kappa"), py::arg("l_f"));
  m.def("contraction_to_qfg", &contraction_to_qfg, py::arg("beta"), py::arg("l_f"));

  // --- rates ---
  m.def("theoretical_factor",
        [](const std::string& method, double mu, double l_f, std::optional<double> fdm_l,
           std::optional<double> fdm_beta, std::optional<double> fdm_lbar) {
          return theoretical_factor(build_model(method, mu, l_f, std::nullopt, std::nullopt, fdm_l,
                                                fdm_beta, fdm_lbar));
        },
        py::arg("method"), py::arg("mu"), py::arg("l_f"), py::arg("fdm_l") = py::none(),
        py::arg("fdm_beta") = py::none(), py::arg("fdm_lbar") = py::none());
  m.def("bound_curve",
        [](const std::string& method, std::size_t k, double mu, double l_f,
           std::optional<double> dist0_sq, std::optional<double> f_gap0) {
          return bound_curve(build_model(method, mu, l_f, dist0_sq, f_gap0, std::nullopt,
                                         std::nullopt, std::nullopt),
                             k);
        },
        py::arg("method"), py::arg("k"), py::arg("mu"), py::arg("l_f"),
        py::arg("dist0_sq") = py::none(), py::arg("f_gap0") = py::none());
  m.def("empirical_rate",
        [](const Trace& t, const std::string& metric, std::optional<std::size_t> k_lo,
           std::optional<std::size_t> k_hi) {
          const TraceMetric tm = metric == "dist_sq" ? TraceMetric::DistSq : TraceMetric::FGap;
          if (k_lo && k_hi) return empirical_rate(t, tm, *k_lo, *k_hi);
          return empirical_rate(t, tm);
        },
        py::arg("trace"), py::arg("metric") = "f_gap", py::arg("k_lo") = py::none(),
        py::arg("k_hi") = py::none());
  m.def("verify_bound",
        [](const Trace& t, const std::string& method, double mu, double l_f,
           std::optional<double> dist0_sq, std::optional<double> f_gap0, const std::string& metric,
           double tol, std::optional<double> fdm_l, std::optional<double> fdm_beta,
           std::optional<double> fdm_lbar) {
          const TraceMetric tm = metric == "dist_sq" ? TraceMetric::DistSq : TraceMetric::FGap;
          const RateReport report = verify_bound(
              t, build_model(method, mu, l_f, dist0_sq, f_gap0, fdm_l, fdm_beta, fdm_lbar), tm, tol);
          py::dict out;
          out["pass"] = report.pass;
          out["worst_margin"] = report.worst_margin;
          out["empirical_factor"] = report.empirical_factor;
          out["theoretical_factor"] = report.theoretical_factor;
          return out;
        },
        py::arg("trace"), py::arg("method"), py::arg("mu"), py::arg("l_f"),
        py::arg("dist0_sq") = py::none(), py::arg("f_gap0") = py::none(),
        py::arg("metric") = "f_gap", py::arg("tol") = 1e-9, py::arg("fdm_l") = py::none(),
        py::arg("fdm_beta") = py::none(), py::arg("fdm_lbar") = py::none());

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
