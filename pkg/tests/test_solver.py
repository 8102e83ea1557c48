import numpy as np
import pytest

from kacwalk import linalg
from kacwalk.solver import (
    SolveConfig,
    kaczmarz_solve,
    precondition_then_solve,
    project_onto_row,
)
from kacwalk.systems import gaussian_system, random_orthogonal_system
from kacwalk.walk import LinearSystem


def test_project_onto_row_lands_on_hyperplane():
    rng = np.random.default_rng(0)
    a = rng.standard_normal(5)
    y = rng.standard_normal(5)
    out = project_onto_row(y, a, 2.5)
    assert float(a @ out) == pytest.approx(2.5, abs=1e-12)
    # projecting a point already on the plane is a no-op
    again = project_onto_row(out, a, 2.5)
    assert np.abs(again - out).max() < 1e-12


def test_project_onto_row_validation():
    with pytest.raises(ValueError, match="zero row"):
        project_onto_row(np.ones(3), np.zeros(3), 1.0)
    with pytest.raises(ValueError, match="dimension"):
        project_onto_row(np.ones(3), np.ones(4), 1.0)


def test_solver_converges_on_orthogonal_system():
    sys0 = random_orthogonal_system(8, seed=1)
    cfg = SolveConfig(seed=2, max_iters=5000, target_residual=1e-10,
                      record_every=100)
    x, trace = kaczmarz_solve(sys0, np.zeros(8), cfg)
    assert trace.converged
    assert np.abs(x - sys0.x_ref).max() < 1e-9
    assert trace.error_sq[-1] < trace.error_sq[0]
    assert trace.iters[0] == 0
    assert np.all(np.diff(trace.iters) > 0)


def test_solver_starting_at_solution_stops_immediately():
    sys0 = gaussian_system(6, 4, seed=3)
    cfg = SolveConfig(seed=0, max_iters=10, target_residual=1e-8)
    x, trace = kaczmarz_solve(sys0, sys0.x_ref, cfg)
    assert trace.converged
    assert len(trace) == 1
    assert trace.iters[0] == 0
    assert trace.error_sq[0] == 0.0


def test_solver_error_metric_without_reference_is_residual_sq():
    A = np.eye(3)
    b = np.array([3.0, 0.0, -4.0])
    sys0 = LinearSystem(A, b)  # no x_ref
    cfg = SolveConfig(seed=1, max_iters=1, target_residual=1e-30)
    _, trace = kaczmarz_solve(sys0, np.zeros(3), cfg)
    assert trace.error_sq[0] == pytest.approx(25.0, rel=1e-14)


def test_solver_is_seed_deterministic():
    sys0 = gaussian_system(10, 6, seed=4)
    cfg = SolveConfig(seed=7, max_iters=300, target_residual=1e-12,
                      record_every=50)
    x1, t1 = kaczmarz_solve(sys0, np.zeros(6), cfg)
    x2, t2 = kaczmarz_solve(sys0, np.zeros(6), cfg)
    assert np.array_equal(x1, x2)
    assert np.array_equal(t1.error_sq, t2.error_sq)


def test_solver_x0_validation():
    sys0 = gaussian_system(5, 3, seed=5)
    with pytest.raises(ValueError):
        kaczmarz_solve(sys0, np.zeros(4), SolveConfig(seed=0, max_iters=1,
                                                      target_residual=1e-6))


def test_mean_error_contraction_matches_rate_bound():
    # Expected squared error contracts by (1 - sigma_min^2/m) per
    # iteration; check the Monte Carlo mean against the bound plus three
    # standard errors at a couple of checkpoints.
    sys0 = gaussian_system(20, 20, seed=42)
    smin = float(linalg.singular_values(sys0.A)[-1])
    base = float(sys0.x_ref @ sys0.x_ref)
    checkpoints = [100, 300]
    ratios = {k: [] for k in checkpoints}
    for trial in range(60):
        cfg = SolveConfig(seed=1000 + trial, max_iters=300,
                          target_residual=1e-300, record_every=100)
        _, trace = kaczmarz_solve(sys0, np.zeros(20), cfg)
        for k in checkpoints:
            idx = int(np.searchsorted(trace.iters, k))
            ratios[k].append(trace.error_sq[idx] / base)
    for k in checkpoints:
        vals = np.array(ratios[k])
        bound = (1.0 - smin**2 / 20.0) ** k
        se = vals.std(ddof=1) / np.sqrt(len(vals))
        assert vals.mean() <= bound + 3.0 * se


def test_solve_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(seed=0, max_iters=0, target_residual=1e-6)
    with pytest.raises(ValueError):
        SolveConfig(seed=0, max_iters=10, target_residual=0.0)
    with pytest.raises(ValueError):
        SolveConfig(seed=0, max_iters=10, target_residual=1e-6,
                    record_every=0)


# ---------------------------------------------------------------- pipeline


def test_precondition_requires_reference_solution():
    A = np.eye(4)
    sys0 = LinearSystem(A, np.ones(4))
    with pytest.raises(ValueError, match="reference"):
        precondition_then_solve(sys0, 10, SolveConfig(seed=0, max_iters=10,
                                                      target_residual=1e-6))


def test_precondition_zero_steps_is_a_pure_control():
    sys0 = gaussian_system(8, 8, seed=6)
    cfg = SolveConfig(seed=3, max_iters=400, target_residual=1e-10,
                      record_every=100)
    rep = precondition_then_solve(sys0, 0, cfg)
    assert rep.sigma_min_before == rep.sigma_min_after
    assert np.array_equal(rep.trace_raw.error_sq, rep.trace_pre.error_sq)


def test_precondition_improves_conditioning_and_convergence():
    sys0 = gaussian_system(15, 15, seed=21)
    cfg = SolveConfig(seed=5, max_iters=3000, target_residual=1e-9,
                      record_every=200)
    rep = precondition_then_solve(sys0, 2000, cfg)
    assert rep.sigma_min_after > rep.sigma_min_before
    assert np.abs(np.linalg.norm(rep.preconditioned.A, axis=1) - 1.0).max() < 1e-12
    # the walked system still has the same solution
    assert np.abs(rep.preconditioned.A @ sys0.x_ref
                  - rep.preconditioned.b).max() < 1e-9
    # and the solver reaches the target in fewer iterations on it
    assert rep.trace_pre.converged
    if rep.trace_raw.converged:
        assert rep.trace_pre.iters[-1] <= rep.trace_raw.iters[-1]


def test_precondition_walk_seed_changes_walk_not_solver():
    sys0 = gaussian_system(8, 8, seed=9)
    cfg = SolveConfig(seed=11, max_iters=200, target_residual=1e-12,
                      record_every=50)
    rep_a = precondition_then_solve(sys0, 100, cfg, walk_seed=1)
    rep_b = precondition_then_solve(sys0, 100, cfg, walk_seed=2)
    assert not np.array_equal(rep_a.preconditioned.A, rep_b.preconditioned.A)
    assert np.array_equal(rep_a.trace_raw.error_sq, rep_b.trace_raw.error_sq)
