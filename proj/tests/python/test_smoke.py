"""Smoke tests for the python bindings: exercises the main operations and
cross-checks the dense kernels against numpy."""

import numpy as np
import pytest

import growthrates as gr


def test_spectral_norm_matches_numpy():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((6, 4))
    assert gr.spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)
    assert gr.spectral_norm(np.eye(3)) == pytest.approx(1.0)


def test_sigma_min_nonzero_on_rank_deficient():
    rng = np.random.default_rng(11)
    b = rng.standard_normal((5, 3))
    c = rng.standard_normal((3, 8))
    a = b @ c  # rank 3
    svals = np.linalg.svd(a, compute_uv=False)
    assert gr.sigma_min_nonzero(a) == pytest.approx(svals[2], rel=1e-9)


def test_project_affine():
    a = np.array([[1.0, 1.0]])
    p = gr.project_affine(np.array([2.0, 2.0]), a, np.array([1.0]))
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-12)


def test_hoffman_theta_identity():
    assert gr.hoffman_theta(np.eye(4)) == pytest.approx(1.0)
    assert gr.hoffman_theta(2.0 * np.eye(4)) == pytest.approx(0.5)


def test_lp_generation_and_embedding():
    lp = gr.gen_random_lp(5, 8, density=1.0, seed=3)
    assert np.all(lp["u_star"] * lp["s_star"] == 0.0)
    gap = lp["c"] @ lp["u_star"] - lp["b"] @ lp["v_star"]
    assert abs(gap) < 1e-10 * (1.0 + abs(lp["c"] @ lp["u_star"]))

    p = gr.lp_embedding(lp["e"], lp["b"], lp["c"])
    assert p.dim == 2 * 8 + 5
    assert p.residual(lp["x_embedded"]) < 1e-10


def test_gm_contracts_distances_at_the_guaranteed_rate():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 9))
    b = rng.standard_normal(4)
    p = gr.least_squares_problem(a, b)
    constants = p.constants()
    mu = constants["mu_f"]

    trace = gr.run_gm(p, rng.standard_normal(9), max_iters=50, tol=0.0)
    d = trace.dist_sq
    ratio_bound = (1.0 - mu) / (1.0 + mu) + 1e-10
    for i in range(1, len(d)):
        if d[i - 1] < 1e-22:
            break
        assert d[i] / d[i - 1] <= ratio_bound


def test_rfgm_beats_gm_on_an_embedding():
    lp = gr.gen_random_lp(6, 9, density=1.0, seed=12)
    p = gr.lp_embedding(lp["e"], lp["b"], lp["c"])
    x0 = np.zeros(p.dim)
    gm = gr.run_gm(p, x0, max_iters=3000, tol=0.0, record_distances=False)
    rf = gr.run_rfgm(p, x0, mu=1e-4, c=0.1, restart="residual", max_iters=3000,
                     tol=0.0, record_distances=False)
    assert rf.f_gap[-1] < gm.f_gap[-1]
    assert len(rf.restarts) >= 1


def test_certificates_and_conversions():
    rng = np.random.default_rng(21)
    a = rng.standard_normal((3, 7))
    p = gr.least_squares_problem(a, rng.standard_normal(3))
    kappa = p.constants()["kappa_f"]
    cert = gr.check_condition("quasi-strong", p, kappa, samples=2000, seed=4)
    assert cert.passed()
    fg = gr.check_condition("func-growth", p, kappa, samples=2000, seed=4)
    assert fg.passed()
    kappa_eb = gr.convert_constant("func-growth", "error-bound", fg.kappa_empirical, p.l_f)
    assert gr.check_condition("error-bound", p, kappa_eb, samples=2000, seed=4).passed()


def test_rate_helpers():
    assert gr.theoretical_factor("gm-qs", mu=1.0 / 3.0, l_f=1.0) == pytest.approx(0.5)
    assert gr.theta_schedule(1) == (1.0, 0.0)
    assert gr.rfgm_interval(1.0, np.exp(-2.0)) == 6
    curve = gr.bound_curve("fgm-theta", 3, mu=0.1, l_f=2.0, dist0_sq=1.0)
    assert curve == pytest.approx(2.0 * 2.0 / 16.0)


def test_trace_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(31)
    p = gr.least_squares_problem(rng.standard_normal((3, 5)), rng.standard_normal(3))
    trace = gr.run_gm(p, rng.standard_normal(5), max_iters=10, tol=0.0)
    path = tmp_path / "trace.csv"
    trace.to_csv(str(path))
    back = gr.read_trace_csv(str(path))
    np.testing.assert_array_equal(trace.f_gap, back.f_gap)
    np.testing.assert_array_equal(trace.grad_map_norm, back.grad_map_norm)
    assert back.status == trace.status


def test_verify_bound_passes_on_gm():
    rng = np.random.default_rng(41)
    p = gr.least_squares_problem(rng.standard_normal((4, 8)), rng.standard_normal(4))
    mu = p.constants()["mu_f"]
    trace = gr.run_gm(p, rng.standard_normal(8), max_iters=80, tol=0.0)
    report = gr.verify_bound(trace, "gm-qs", mu=mu, l_f=p.l_f,
                             dist0_sq=trace.dist_sq[0], metric="dist_sq", tol=1e-9)
    assert report["pass"]
