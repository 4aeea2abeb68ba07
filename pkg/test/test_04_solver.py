# pylint: disable = missing-docstring

import math
from typing import Optional, Tuple
import warnings

import numpy as np
import numpy.typing as npt
import pytest
from scipy.optimize import lsq_linear

from spatialfair.bounds import FairnessConfig, derive_bounds
from spatialfair.errors import (ConfigError, DimensionMismatchError, InputError, NonConvergenceWarning,
                                NonFiniteInputError, UnderdeterminedSystemWarning)
from spatialfair.polynomial import build_design_matrix
from spatialfair.solver import SolverConfig, bvls_solve

def _random_problem(seed: int, m: int = 60, q: int = 6) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64],
                                                                 npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(m, q))
    b = rng.normal(size=m)*3
    upper = rng.uniform(0.05, 1.0, size=q)
    lower = -rng.uniform(0.05, 1.0, size=q)
    lower[0], upper[0] = -math.inf, math.inf
    return mat, b, lower, upper

def test_worked_example() -> None:
    mat = np.array([[1.0, 0.0], [1.0, 0.5], [1.0, 1.0]])
    a, diagnostics = bvls_solve(mat, [0.0, 1.0, 2.0], ([-10.0, -1.0], [10.0, 1.0]))
    assert np.allclose(a, [0.5, 1.0], atol=1e-12)
    assert diagnostics.converged
    assert diagnostics.stop_reason == "optimal"
    assert diagnostics.active_upper == (1,)
    assert diagnostics.active_lower == ()
    assert diagnostics.active_set == (1,)
    assert diagnostics.objective == pytest.approx(math.sqrt(0.5), abs=1e-12)

@pytest.mark.parametrize("seed", range(12))
def test_matches_scipy_bvls(seed: int) -> None:
    mat, b, lower, upper = _random_problem(seed)
    a, diagnostics = bvls_solve(mat, b, (lower, upper))
    expected = lsq_linear(mat, b, bounds=(lower, upper), method="bvls", tol=1e-12).x
    assert diagnostics.converged
    assert np.all(lower <= a) and np.all(a <= upper)
    assert np.allclose(a, expected, atol=1e-7)
    assert diagnostics.objective <= float(np.linalg.norm(mat@expected-b))*(1+1e-9)+1e-12

@pytest.mark.parametrize("seed", range(4))
def test_seeded_start_reaches_same_optimum(seed: int) -> None:
    mat, b, lower, upper = _random_problem(seed+100)
    a_zero, _ = bvls_solve(mat, b, (lower, upper))
    a_seeded, diagnostics = bvls_solve(mat, b, (lower, upper), SolverConfig(seed=seed))
    assert diagnostics.converged
    assert np.allclose(a_zero, a_seeded, atol=1e-7)
    again, _ = bvls_solve(mat, b, (lower, upper), SolverConfig(seed=seed))
    assert np.array_equal(a_seeded, again)

def test_inactive_bounds_give_least_squares() -> None:
    mat, b, _, _ = _random_problem(7)
    bound = np.full(mat.shape[1], 1e6)
    a, diagnostics = bvls_solve(mat, b, (-bound, bound))
    expected = np.linalg.solve(mat.T@mat, mat.T@b)
    assert np.allclose(a, expected, atol=1e-9)
    assert diagnostics.active_set == ()
    assert diagnostics.iterations == 1

@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_recovers_coefficients_within_bounds(n: int) -> None:
    rng = np.random.default_rng(n)
    dtr = rng.uniform(0, 1, size=200)
    box = derive_bounds(FairnessConfig(1, n))
    truth = np.concatenate(([0.4], 0.5*box.magnitudes*rng.choice([-1.0, 1.0], size=n)))
    design = build_design_matrix(dtr, n)
    a, diagnostics = bvls_solve(design, design.predict(truth), box)
    assert diagnostics.converged
    assert np.allclose(a, truth, atol=1e-6)
    assert diagnostics.objective < 1e-8

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("c", [1, 5, 25])
def test_kkt_conditions(c: float, n: int) -> None:
    rng = np.random.default_rng(10*n+int(c))
    dtr = rng.uniform(0, 1, size=300)
    scores = np.clip(0.5+0.4*np.sin(9*dtr)+rng.normal(0, 0.05, size=300), 0, 1)
    box = derive_bounds(FairnessConfig(c, n))
    design = build_design_matrix(dtr, n)
    a, diagnostics = bvls_solve(design, scores, box)
    assert diagnostics.converged
    assert diagnostics.kkt_violation <= 1e-6
    assert box.contains(a)
    g = design.matrix.T@(design.matrix@a-scores)
    scale = float(np.linalg.norm(design.matrix.T@scores))
    for idx in diagnostics.active_lower:
        assert a[idx] == box.lower[idx] and g[idx] >= -1e-6*scale
    for idx in diagnostics.active_upper:
        assert a[idx] == box.upper[idx] and g[idx] <= 1e-6*scale

@pytest.mark.parametrize("seed", [None, 0, 1])
def test_cost_history_non_increasing(seed: Optional[int]) -> None:
    mat, b, lower, upper = _random_problem(42, m=80, q=10)
    _, diagnostics = bvls_solve(mat, b, (lower, upper), SolverConfig(seed=seed))
    history = np.array(diagnostics.cost_history)
    assert len(history) >= 2
    assert np.all(np.diff(history) <= 1e-12*history[:-1]+1e-12)
    assert diagnostics.objective == pytest.approx(history[-1], rel=1e-9, abs=1e-12)

def test_iteration_budget_exhausted() -> None:
    with pytest.warns(NonConvergenceWarning):
        a, diagnostics = bvls_solve(np.eye(3), [5.0, 5.0, 5.0], ([-1.0]*3, [1.0]*3),
                                    SolverConfig(max_iterations=1))
    assert not diagnostics.converged
    assert diagnostics.stop_reason == "max_iterations"
    assert diagnostics.iterations == 1
    assert np.all(a <= 1.0) and np.all(a >= -1.0)

def test_converged_solve_does_not_warn() -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("error", NonConvergenceWarning)
        _, diagnostics = bvls_solve(np.eye(3), [5.0, 5.0, 5.0], ([-1.0]*3, [1.0]*3))
    assert diagnostics.converged
    assert diagnostics.active_upper == (0, 1, 2)

def test_underdetermined_system() -> None:
    mat = np.array([[1.0, 0.5, 0.25, 0.125], [1.0, 1.0, 1.0, 1.0]])
    with pytest.warns(UnderdeterminedSystemWarning):
        a, diagnostics = bvls_solve(mat, [0.3, 0.6], ([-10.0]*4, [10.0]*4))
    assert diagnostics.rank_deficient
    assert np.allclose(mat@a, [0.3, 0.6], atol=1e-9)

def test_solve_errors() -> None:
    mat = np.eye(2)
    with pytest.raises(DimensionMismatchError):
        bvls_solve(mat, [1.0, 2.0, 3.0], ([-1.0]*2, [1.0]*2))
    with pytest.raises(DimensionMismatchError):
        bvls_solve(mat, [1.0, 2.0], ([-1.0]*3, [1.0]*3))
    with pytest.raises(InputError):
        bvls_solve(mat, [1.0, 2.0], ([1.0]*2, [-1.0]*2))
    with pytest.raises(NonFiniteInputError):
        bvls_solve(mat, [1.0, math.nan], ([-1.0]*2, [1.0]*2))
    with pytest.raises(InputError):
        bvls_solve([1.0, 2.0], [1.0, 2.0], ([-1.0], [1.0]))

def test_solver_config_options() -> None:
    config = SolverConfig(seed=3)
    assert config.options() == {"max_iterations": 300, "tolerance": 0.01, "seed": 3, "kkt_tolerance": 1e-09}
    assert config.options(skip_defaults=True) == {"seed": 3}
    assert repr(SolverConfig()) == "SolverConfig()"
    assert repr(SolverConfig().with_options(max_iterations=10)) == "SolverConfig(max_iterations=10)"
    assert config.with_options(seed=None) == SolverConfig()
    assert hash(config.with_options(seed=3)) == hash(config)
    with pytest.raises(KeyError):
        config.with_options(method="trf")
    with pytest.raises(ConfigError):
        SolverConfig(max_iterations=0)
    with pytest.raises(ConfigError):
        SolverConfig(tolerance=0.0)
    with pytest.raises(TypeError):
        SolverConfig(seed=1.5) # type: ignore

def test_diagnostics_record() -> None:
    _, diagnostics = bvls_solve(np.eye(2), [0.5, 0.5], ([-1.0]*2, [1.0]*2))
    record = diagnostics.to_record()
    assert list(record) == ["iterations", "final_cost", "converged", "solve_time"]
    assert record["converged"] is True
    assert record["solve_time"] >= 0.0
