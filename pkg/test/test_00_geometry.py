# pylint: disable = missing-docstring

import math
from typing import Dict, List, Tuple

import numpy as np
import pytest

from spatialfair.errors import (ClippedInputWarning, DegenerateDimensionWarning, DegenerateReferenceError,
                                DimensionMismatchError, EmptyInputError, InvalidNormOrderError, NonFiniteInputError)
from spatialfair.geometry import (AffineTransform, DistanceTransform, DtRVector, compute_dtr, cross_distances,
                                  decode_norm_order, encode_norm_order, minkowski_distance, normalize_coords,
                                  transform_from_dict)

_distances: Dict[str, Tuple[List[float], List[float], float, float]] = {
    "manhattan": ([3, 0], [0, 4], 1, 7.0),
    "euclidean": ([3, 0], [0, 4], 2, 5.0),
    "chebyshev": ([3, 0], [0, 4], math.inf, 4.0),
    "p=3": ([1, 1], [0, 0], 3, 2**(1/3)),
    "same point": ([2.5, -1], [2.5, -1], 2, 0.0),
    "one dimension": ([0.25], [1.0], 7, 0.75),
}

@pytest.mark.parametrize("a,b,p,expected", _distances.values(), ids=list(_distances.keys()))
def test_minkowski_distance(a: List[float], b: List[float], p: float, expected: float) -> None:
    assert minkowski_distance(a, b, p) == pytest.approx(expected, abs=1e-12)
    assert minkowski_distance(b, a, p) == pytest.approx(expected, abs=1e-12)

_norm_orders: Dict[str, Tuple[float, int]] = {
    "manhattan": (1, 3),
    "euclidean": (2, 2),
    "p=3": (3, 4),
    "chebyshev": (math.inf, 3),
    "one dimension": (2, 1),
}

@pytest.mark.parametrize("p,dim", _norm_orders.values(), ids=list(_norm_orders.keys()))
def test_triangle_inequality(p: float, dim: int) -> None:
    rng = np.random.default_rng(dim*10+int(min(p, 9)))
    points = rng.uniform(-1, 1, size=(40, dim))
    dist = cross_distances(points, points, p)
    assert np.all(np.diag(dist) == 0.0)
    assert np.allclose(dist, dist.T, atol=1e-15, rtol=0)
    # dist[i, k] <= dist[i, j]+dist[j, k] over all triples
    assert np.all(dist[:, None, :] <= dist[:, :, None]+dist[None, :, :]+1e-12)
    for _ in range(200):
        a, b, c = rng.uniform(-5, 5, size=(3, dim))
        assert minkowski_distance(a, c, p) <= minkowski_distance(a, b, p)+minkowski_distance(b, c, p)+1e-12
        pair = cross_distances(a[None, :], b[None, :], p)[0, 0]
        assert minkowski_distance(a, b, p) == pytest.approx(float(pair), abs=1e-12)

@pytest.mark.parametrize("p", [0.5, 0, -1, math.nan])
def test_invalid_norm_order(p: float) -> None:
    with pytest.raises(InvalidNormOrderError):
        minkowski_distance([0, 0], [1, 1], p)

def test_minkowski_distance_errors() -> None:
    with pytest.raises(DimensionMismatchError):
        minkowski_distance([0, 0], [1, 1, 1], 2)
    with pytest.raises(NonFiniteInputError):
        minkowski_distance([0, math.nan], [1, 1], 2)
    with pytest.raises(EmptyInputError):
        minkowski_distance([], [], 2)
    with pytest.raises(TypeError):
        minkowski_distance([0, 0], [1, 1], "2") # type: ignore

def test_dtr_worked_example() -> None:
    # the farthest individual sits at distance sqrt(10) from the reference
    dtr = compute_dtr([[1, 1], [3, 1], [2, 2], [0, 1]], [0, 0], 2)
    assert dtr.gamma == pytest.approx(math.sqrt(10), abs=1e-12)
    assert dtr.distances[0] == pytest.approx(math.sqrt(2)/math.sqrt(10), abs=1e-12)
    assert dtr.distances[1] == 1.0
    assert float(np.max(dtr.distances)) == 1.0
    assert np.all((dtr.distances >= 0) & (dtr.distances <= 1))
    assert dtr.p == 2.0
    assert dtr.reference is not None and list(dtr.reference) == [0.0, 0.0]

def test_dtr_norm_orders() -> None:
    points = [[1, 1], [2, 0]]
    assert list(compute_dtr(points, [0, 0], 1).distances) == [1.0, 1.0]
    assert list(compute_dtr(points, [0, 0], math.inf).distances) == [0.5, 1.0]

_scalings: Dict[str, Tuple[float, float]] = {
    "halved, euclidean": (0.5, 2),
    "tripled, manhattan": (3.0, 1),
    "thousandfold, chebyshev": (1000.0, math.inf),
    "tiny, p=3": (1e-3, 3),
}

@pytest.mark.parametrize("scale,p", _scalings.values(), ids=list(_scalings.keys()))
def test_dtr_scale_invariance(scale: float, p: float) -> None:
    rng = np.random.default_rng(17)
    points = rng.uniform(-10, 10, size=(50, 2))
    reference = rng.uniform(-10, 10, size=2)
    dtr = compute_dtr(points, reference, p)
    scaled = compute_dtr(scale*points, scale*reference, p)
    assert np.allclose(scaled.distances, dtr.distances, atol=1e-12, rtol=0)
    assert scaled.gamma == pytest.approx(scale*dtr.gamma, rel=1e-12)

def test_dtr_degenerate_reference() -> None:
    with pytest.raises(DegenerateReferenceError):
        compute_dtr([[1, 1], [1, 1]], [1, 1], 2)
    with pytest.raises(DimensionMismatchError):
        compute_dtr([[1, 1], [1, 2]], [1, 1, 1], 2)

def test_dtr_vector_validation() -> None:
    with pytest.raises(ValueError):
        DtRVector([0.5, 1.5], 1.0)
    with pytest.raises(DegenerateReferenceError):
        DtRVector([0.5, 1.0], 0.0)
    dtr = DtRVector([0.5, 1.0], 2.0)
    assert dtr.transform is None
    with pytest.raises(ValueError):
        dtr.distances[0] = 0.1

def test_normalize_coords() -> None:
    normalized, transform = normalize_coords([[0, 10], [5, 20], [10, 30]])
    assert normalized.tolist() == [[-1.0, -1.0], [0.0, 0.0], [1.0, 1.0]]
    assert transform.lows.tolist() == [0.0, 10.0]
    assert transform.highs.tolist() == [10.0, 30.0]
    assert transform.degenerate == ()
    assert np.allclose(transform.inverse(normalized), [[0, 10], [5, 20], [10, 30]], atol=1e-12, rtol=0)

def test_normalize_coords_inverse() -> None:
    rng = np.random.default_rng(23)
    points = rng.uniform(-10, 10, size=(200, 3))*[1.0, 0.01, 5.0]
    normalized, transform = normalize_coords(points)
    assert np.all(np.abs(normalized) <= 1.0)
    assert normalized.min(axis=0).tolist() == [-1.0]*3 and normalized.max(axis=0).tolist() == [1.0]*3
    assert np.allclose(transform.inverse(normalized), points, atol=1e-12, rtol=0)

def test_normalize_coords_degenerate_dimension() -> None:
    with pytest.warns(DegenerateDimensionWarning):
        normalized, transform = normalize_coords([[0, 7], [5, 7], [10, 7]])
    assert normalized[:, 1].tolist() == [0.0, 0.0, 0.0]
    assert transform.degenerate == (1,)
    with pytest.raises(EmptyInputError):
        normalize_coords(np.zeros((0, 2)))

def test_affine_transform_clipping() -> None:
    transform = AffineTransform([0, 0], [10, 10])
    with pytest.warns(ClippedInputWarning):
        clipped, num_clipped = transform.apply_clipped([[5, 5], [20, 5], [-5, -5]])
    assert num_clipped == 2
    assert clipped.tolist() == [[0.0, 0.0], [1.0, 0.0], [-1.0, -1.0]]

def test_distance_transform() -> None:
    dtr = compute_dtr([[1, 1], [3, 1], [2, 2], [0, 1]], [0, 0], 2)
    transform = dtr.transform
    assert isinstance(transform, DistanceTransform)
    values, num_clipped = transform.apply([[1, 1], [3, 1]])
    assert num_clipped == 0
    assert np.allclose(values, dtr.distances[:2], atol=1e-15)
    with pytest.warns(ClippedInputWarning):
        values, num_clipped = transform.apply([[30, 10]])
    assert num_clipped == 1 and values.tolist() == [1.0]

def test_transform_dict_form() -> None:
    transforms = [AffineTransform([0, -1], [2, 1]), DistanceTransform([0.5, 0.5], math.inf, 3.0)]
    for transform in transforms:
        restored = transform_from_dict(transform.to_dict())
        assert restored == transform
        assert hash(restored) == hash(transform)
    assert DistanceTransform([0, 0], math.inf, 1.0).to_dict()["p"] == "inf"
    with pytest.raises(ValueError):
        transform_from_dict({"kind": "polar"})

def test_norm_order_encoding() -> None:
    assert encode_norm_order(math.inf) == "inf"
    assert encode_norm_order(2.0) == 2.0
    assert decode_norm_order("inf") == math.inf
    assert decode_norm_order(3) == 3.0
