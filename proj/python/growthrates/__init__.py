"""First-order solvers with linear rates under relaxed strong convexity.

Thin wrapper over the compiled core: structured problems f(x) = g(Ax) + c^T x
over simple sets, projected/fast/restarted gradient and exact cyclic
coordinate descent, condition certificates, and theoretical-bound checks.
"""

from growthrates._core import (
    Certificate,
    GrowthratesError,
    Problem,
    Trace,
    bound_curve,
    check_condition,
    contraction_to_qfg,
    convert_constant,
    empirical_rate,
    gen_random_lp,
    hoffman_theta,
    least_squares_problem,
    lp_embedding,
    project_affine,
    project_polyhedron,
    qp_problem,
    read_trace_csv,
    rfgm_interval,
    run_cyclic_cd,
    run_fgm_const,
    run_fgm_theta,
    run_gm,
    run_rfgm,
    sigma_min_nonzero,
    singular_values,
    spectral_norm,
    theoretical_factor,
    theta_schedule,
    verify_bound,
    __version__,
)

__all__ = [
    "Certificate",
    "GrowthratesError",
    "Problem",
    "Trace",
    "bound_curve",
    "check_condition",
    "contraction_to_qfg",
    "convert_constant",
    "empirical_rate",
    "gen_random_lp",
    "hoffman_theta",
    "least_squares_problem",
    "lp_embedding",
    "project_affine",
    "project_polyhedron",
    "qp_problem",
    "read_trace_csv",
    "rfgm_interval",
    "run_cyclic_cd",
    "run_fgm_const",
    "run_fgm_theta",
    "run_gm",
    "run_rfgm",
    "sigma_min_nonzero",
    "singular_values",
    "spectral_norm",
    "theoretical_factor",
    "theta_schedule",
    "verify_bound",
    "__version__",
]
