# pylint: disable = missing-docstring

import math
from typing import Dict, List, Tuple

import numpy as np
import pytest

from spatialfair.errors import ConfigError, DimensionMismatchError, InputError, NonFiniteInputError, UnnormalizedInputError
from spatialfair.polynomial import (SeparablePolynomial, UnivariatePolynomial, build_design_matrix, column_map,
                                    eval_separable, eval_univariate, from_dict)

_univariate: Dict[str, Tuple[List[float], float, float]] = {
    "linear": ([0.5, -0.25], 0.4, 0.4),
    "quadratic at -1": ([0.1, 0.2, 0.3], -1.0, 0.2),
    "quadratic at 1": ([0.1, 0.2, 0.3], 1.0, 0.6),
    "cubic at 0": ([0.7, 1.0, -2.0, 3.0], 0.0, 0.7),
    "cubic at 0.5": ([0.0, 1.0, -2.0, 3.0], 0.5, 0.375),
}

@pytest.mark.parametrize("coeffs,x,expected", _univariate.values(), ids=list(_univariate.keys()))
def test_univariate_evaluate(coeffs: List[float], x: float, expected: float) -> None:
    poly = UnivariatePolynomial(coeffs)
    assert poly.degree == len(coeffs)-1
    assert eval_univariate(poly, x) == pytest.approx(expected, abs=1e-12)
    assert float(poly([x])[0]) == pytest.approx(expected, abs=1e-12)
    assert float(poly([[x]])[0]) == pytest.approx(expected, abs=1e-12)

def test_univariate_errors() -> None:
    with pytest.raises(ConfigError):
        UnivariatePolynomial([0.5])
    with pytest.raises(NonFiniteInputError):
        UnivariatePolynomial([0.5, math.inf])
    with pytest.raises(InputError):
        UnivariatePolynomial([0.5, 1.0]).evaluate([[0.1, 0.2]])

@pytest.mark.parametrize("c,n", [(1, 1), (1, 2), (5, 3), (25, 15)])
def test_lipschitz_family(c: float, n: int) -> None:
    poly = UnivariatePolynomial.lipschitz_family(c, n)
    assert poly.degree == n
    assert poly.coefficients[n] == pytest.approx(c/n)
    assert np.all(poly.coefficients[:n] == 0.0)
    assert poly.derivative_sum() == pytest.approx(c)
    xs = np.linspace(-1, 1, 201)
    values = poly(xs)
    slopes = np.abs(np.diff(values))/np.diff(xs)
    assert np.all(slopes <= c+1e-9)

def test_univariate_derivative_sum() -> None:
    poly = UnivariatePolynomial([3.0, -0.5, 0.25, -0.1])
    assert poly.derivative_sum() == pytest.approx(0.5+0.5+0.3)
    assert poly.lipschitz_constant(1) == poly.lipschitz_constant(math.inf) == poly.derivative_sum()
    assert poly.intercept == 3.0

def test_separable_worked_example() -> None:
    poly = SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]])
    assert eval_separable(poly, [0.5, -1.0]) == pytest.approx(0.525, abs=1e-12)
    assert poly.num_vars == 2 and poly.degree == 2
    assert poly.coefficients.tolist() == [0.1, 0.2, 0.1, 0.0, 0.3]
    assert poly.component(1).coefficients.tolist() == [0.0, 0.0, 0.3]
    with pytest.raises(IndexError):
        poly.component(2)
    with pytest.raises(DimensionMismatchError):
        eval_separable(poly, [0.5, -1.0, 0.0])

_holder: Dict[str, Tuple[float, float]] = {
    "p=2": (2, math.sqrt(17)),
    "p=1": (1, 4.0),
    "p=inf": (math.inf, 5.0),
}

@pytest.mark.parametrize("p,expected", _holder.values(), ids=list(_holder.keys()))
def test_separable_lipschitz_constant(p: float, expected: float) -> None:
    poly = SeparablePolynomial(0.0, [[1.0], [4.0]])
    assert poly.derivative_sums().tolist() == [1.0, 4.0]
    assert poly.lipschitz_constant(p) == pytest.approx(expected, abs=1e-12)

def test_separable_lipschitz_constant_holds() -> None:
    poly = SeparablePolynomial(0.2, [[0.3, -0.1, 0.05], [-0.2, 0.1, 0.0], [0.1, 0.0, -0.05]])
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, size=(500, 3))
    y = rng.uniform(-1, 1, size=(500, 3))
    for p in (1, 2, 3, math.inf):
        bound = poly.lipschitz_constant(p)
        dist = np.linalg.norm(x-y, ord=p, axis=1)
        assert np.all(np.abs(poly(x)-poly(y)) <= bound*dist+1e-12)

def test_from_coefficients() -> None:
    poly = SeparablePolynomial.from_coefficients([0.1, 0.2, 0.1, 0.0, 0.3], 2, 2)
    assert poly == SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]])
    assert hash(poly) == hash(SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]]))
    with pytest.raises(DimensionMismatchError):
        SeparablePolynomial.from_coefficients([0.1, 0.2, 0.1], 2, 2)

def test_column_map() -> None:
    assert column_map("separable", 2, 2) == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2))
    assert column_map("univariate", 1, 3) == ((0, 0), (0, 1), (0, 2), (0, 3))
    assert UnivariatePolynomial([0.0, 1.0]).column_map == ((0, 0), (0, 1))
    with pytest.raises(ValueError):
        column_map("univariate", 2, 2)
    with pytest.raises(ValueError):
        column_map("tensor", 2, 2) # type: ignore

def test_univariate_design_matrix() -> None:
    design = build_design_matrix([0.0, 0.5, 1.0], 3)
    assert design.rows == 3 and design.columns == 4
    assert design.matrix.tolist() == [[1.0, 0.0, 0.0, 0.0], [1.0, 0.5, 0.25, 0.125], [1.0, 1.0, 1.0, 1.0]]
    coeffs = [0.1, 0.2, 0.3, 0.4]
    assert np.allclose(design.predict(coeffs), UnivariatePolynomial(coeffs)([0.0, 0.5, 1.0]))
    assert design.polynomial(coeffs) == UnivariatePolynomial(coeffs)
    with pytest.raises(DimensionMismatchError):
        design.predict([0.1, 0.2])

def test_separable_design_matrix() -> None:
    points = [[0.5, -1.0], [0.0, 1.0]]
    design = build_design_matrix(points, 2, "separable")
    assert design.column_map == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2))
    assert design.matrix.tolist() == [[1.0, 0.5, 0.25, -1.0, 1.0], [1.0, 0.0, 0.0, 1.0, 1.0]]
    poly = SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]])
    assert np.allclose(design.predict(poly.coefficients), poly(points))
    assert design.polynomial(poly.coefficients) == poly

def test_design_matrix_errors() -> None:
    with pytest.raises(UnnormalizedInputError):
        build_design_matrix([0.0, 1.5], 2)
    with pytest.raises(UnnormalizedInputError):
        build_design_matrix([[0.0, -1.01]], 2, "separable")
    build_design_matrix([1.0+1e-13], 2)
    with pytest.raises(ConfigError):
        build_design_matrix([0.5], 0)
    with pytest.raises(ConfigError):
        build_design_matrix([0.5], 2, "tensor")
    with pytest.raises(InputError):
        build_design_matrix([[0.5, 0.5]], 2)

def test_from_dict() -> None:
    polys = [UnivariatePolynomial([0.1, 0.2, 0.3]), SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]])]
    for poly in polys:
        assert from_dict(poly.to_dict()) == poly
    with pytest.raises(ValueError):
        from_dict({"structure": "tensor", "coefficients": []})
