# pylint: disable = missing-docstring

import math
from typing import Dict, List, Tuple

import numpy as np
import pytest

from spatialfair import random
from spatialfair.errors import ConfigError, InputError, ScoreRangeError
from spatialfair.geometry import cross_distances
from spatialfair.metrics import (ScoredDataset, clamp_scores, fitting_error, pairwise_audit, statistical_distance,
                                 total_variation, validate_c, validate_mode)

def test_statistical_distance() -> None:
    assert statistical_distance(0.8, 0.3) == pytest.approx(0.5)
    assert statistical_distance(0.3, 0.8) == pytest.approx(0.5)
    assert statistical_distance(1, 1) == 0.0
    with pytest.raises(ScoreRangeError):
        statistical_distance(1.2, 0.5)

@pytest.mark.parametrize("s,t", [(0.8, 0.3), (0.0, 1.0), (0.25, 0.25)])
def test_total_variation_binary(s: float, t: float) -> None:
    assert total_variation([1-s, s], [1-t, t]) == pytest.approx(statistical_distance(s, t), abs=1e-15)

def test_total_variation_errors() -> None:
    assert total_variation([0.5, 0.5, 0.0], [0.0, 0.5, 0.5]) == pytest.approx(0.5)
    with pytest.raises(InputError):
        total_variation([0.5, 0.6], [0.5, 0.5])
    with pytest.raises(InputError):
        total_variation([0.5, 0.5], [1.0])

_audits: Dict[str, Tuple[List[float], List[float], float, int, int]] = {
    "unit jump at half distance": ([0.0, 0.5], [0.0, 1.0], 1, 1, 1),
    "unit jump at half distance, c=2": ([0.0, 0.5], [0.0, 1.0], 2, 1, 0),
    "one of three pairs": ([0.0, 0.5, 1.0], [0.0, 0.3, 0.9], 1, 3, 1),
    "constant scores": ([0.0, 0.1, 0.2, 0.3], [0.4]*4, 1, 6, 0),
    "exactly on the boundary": ([0.0, 0.25], [0.5, 0.75], 1, 1, 0),
}

@pytest.mark.parametrize("dtr,scores,c,total,violated", _audits.values(), ids=list(_audits.keys()))
def test_pairwise_audit(dtr: List[float], scores: List[float], c: float, total: int, violated: int) -> None:
    data = ScoredDataset(dtr, scores)
    report = pairwise_audit(data, scores, c)
    assert report.total_pairs == total
    assert report.violated_pairs == violated
    assert report.unfairness_pct == pytest.approx(100*violated/total)
    assert report.passed == (violated == 0)
    assert report.c_used == float(c)
    assert not report.sampled
    assert data.audit_original(c) == report

def test_audit_max_violation() -> None:
    data = ScoredDataset([0.0, 0.5], [0.0, 1.0])
    assert pairwise_audit(data, [0.0, 1.0], 1).max_violation == pytest.approx(0.5)
    assert pairwise_audit(data, [0.0, 0.1], 1).max_violation == 0.0

def test_zone_audit_uses_norm_order() -> None:
    points = [[0.0, 0.0], [0.5, 0.5]]
    manhattan = ScoredDataset(points, [0.0, 1.0], mode="zone", p=1)
    chebyshev = ScoredDataset(points, [0.0, 1.0], mode="zone", p=math.inf)
    assert manhattan.audit_original(1).violated_pairs == 0
    assert chebyshev.audit_original(1).violated_pairs == 1

def test_audit_concurrent_blocks_match_sequential() -> None:
    with random.options(seed=11):
        data = next(random.rand_dataset(mode="zone", size=300, dim=2, noise=0.3))
    sequential = pairwise_audit(data, data.scores, 1)
    concurrent = pairwise_audit(data, data.scores, 1, workers=4)
    assert sequential == concurrent
    assert sequential.total_pairs == 300*299//2

def test_sampled_audit() -> None:
    with random.options(seed=5):
        data = next(random.rand_dataset(size=200, noise=0.3))
    first = pairwise_audit(data, data.scores, 1, sample=5000, seed=3)
    second = pairwise_audit(data, data.scores, 1, sample=5000, seed=3)
    exhaustive = pairwise_audit(data, data.scores, 1)
    assert first == second
    assert first.sampled and first.total_pairs == 5000
    assert abs(first.unfairness_pct-exhaustive.unfairness_pct) < 5.0

_geometries: Dict[str, Tuple[str, int, float]] = {
    "distance": ("distance", 1, 2),
    "zone, manhattan": ("zone", 2, 1),
    "zone, euclidean": ("zone", 3, 2),
    "zone, chebyshev": ("zone", 2, math.inf),
}

def _dataset(mode: str, dim: int, p: float, seed: int) -> ScoredDataset:
    with random.options(seed=seed):
        return next(random.rand_dataset(mode=mode, size=150, dim=dim, p=p, noise=0.3))

@pytest.mark.parametrize("mode,dim,p", _geometries.values(), ids=list(_geometries.keys()))
def test_audit_permutation_invariant(mode: str, dim: int, p: float) -> None:
    data = _dataset(mode, dim, p, 41)
    perm = np.random.default_rng(41).permutation(data.size)
    permuted = ScoredDataset(data.inputs[perm], data.scores[perm], mode=mode, p=data.p)
    for c in (1, 2):
        report = pairwise_audit(data, data.scores, c)
        permuted_report = pairwise_audit(permuted, permuted.scores, c)
        assert permuted_report.total_pairs == report.total_pairs
        assert permuted_report.violated_pairs == report.violated_pairs
        assert permuted_report.max_violation == pytest.approx(report.max_violation, abs=1e-15)

@pytest.mark.parametrize("mode,dim,p", _geometries.values(), ids=list(_geometries.keys()))
def test_violations_non_increasing_in_c(mode: str, dim: int, p: float) -> None:
    data = _dataset(mode, dim, p, 42)
    reports = [data.audit_original(c) for c in (1, 1.5, 2, 5, 25)]
    assert reports[0].violated_pairs > 0
    violated = [report.violated_pairs for report in reports]
    assert all(b <= a for a, b in zip(violated, violated[1:]))
    excess = [report.max_violation for report in reports]
    assert all(b <= a for a, b in zip(excess, excess[1:]))

_lipschitz_raw: Dict[str, Tuple[str, int, float, float]] = {
    "distance, c=1.5": ("distance", 1, 2, 1.5),
    "zone, manhattan, c=1": ("zone", 2, 1, 1.0),
    "zone, euclidean, c=3": ("zone", 3, 2, 3.0),
    "zone, chebyshev, c=2": ("zone", 2, math.inf, 2.0),
}

@pytest.mark.parametrize("mode,dim,p,c", _lipschitz_raw.values(), ids=list(_lipschitz_raw.keys()))
def test_clamp_preserves_fairness(mode: str, dim: int, p: float, c: float) -> None:
    data = _dataset(mode, dim, p, 43)
    # c times a distance is c-Lipschitz; centred on 0.5 it ranges well outside [0, 1]
    dist = cross_distances(data.inputs, np.full((1, dim), -1.0), data.p)[:, 0]
    raw = 0.5+c*(dist-(dist.min()+dist.max())/2)
    assert raw.min() < 0.0 and raw.max() > 1.0
    clamped = clamp_scores(raw)
    assert pairwise_audit(data, clamped, c).violated_pairs == 0
    raw_gaps = np.abs(raw[:, None]-raw[None, :])
    clamped_gaps = np.abs(clamped[:, None]-clamped[None, :])
    assert np.all(clamped_gaps <= raw_gaps)

def test_fitting_error_permutation_invariant() -> None:
    rng = np.random.default_rng(44)
    original, mapped = rng.uniform(0, 1, size=(2, 500))
    perm = rng.permutation(500)
    error = fitting_error(original, mapped)
    assert fitting_error(original[perm], mapped[perm]) == pytest.approx(error, rel=1e-12)
    assert fitting_error(mapped, original) == pytest.approx(error, rel=1e-12)

def test_audit_errors() -> None:
    data = ScoredDataset([0.0, 0.5, 1.0], [0.1, 0.2, 0.3])
    with pytest.raises(ConfigError):
        pairwise_audit(data, data.scores, 0.5)
    with pytest.raises(ConfigError):
        pairwise_audit(data, data.scores, 1, sample=0)
    with pytest.raises(ConfigError):
        pairwise_audit(data, data.scores, 1, workers=0)
    with pytest.raises(InputError):
        pairwise_audit(data, [0.1, 0.2], 1)

def test_scored_dataset_validation() -> None:
    with pytest.raises(ScoreRangeError) as info:
        ScoredDataset([0.0, 0.5, 1.0], [0.1, 1.2, 0.3])
    assert info.value.index == 1 and info.value.value == 1.2
    with pytest.raises(InputError):
        ScoredDataset([0.0, 0.5], [0.1, 0.2, 0.3])
    with pytest.raises(InputError):
        ScoredDataset([0.5], [0.1])
    with pytest.raises(InputError):
        ScoredDataset([0.0, 1.5], [0.1, 0.2])
    with pytest.raises(InputError):
        ScoredDataset([[0.0, 1.0], [1.0, 0.0]], [0.1, 0.2])
    with pytest.raises(ConfigError):
        ScoredDataset([0.0, 1.0], [0.1, 0.2], mode="radial")

def test_fitting_error_worked_example() -> None:
    assert fitting_error([0.8, 0.7, 0.3, 0.5], [0.5]*4) == pytest.approx(0.206, abs=5e-4)
    assert fitting_error([0.2, 0.4], [0.2, 0.4]) == 0.0
    with pytest.raises(InputError):
        fitting_error([0.2, 0.4], [0.2])

def test_clamp_scores() -> None:
    assert clamp_scores([-0.2, 0.5, 1.3]).tolist() == [0.0, 0.5, 1.0]

def test_validators() -> None:
    assert validate_c(1) == 1.0
    assert validate_mode("zone") == "zone"
    for c in (0.99, math.inf, math.nan):
        with pytest.raises(ConfigError):
            validate_c(c)
    with pytest.raises(TypeError):
        validate_c("1") # type: ignore
    assert np.isclose(validate_c(25), 25.0)
