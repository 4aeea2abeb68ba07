"""
    Separable multivariate polynomials: sums of single-variable polynomials with a shared intercept,

    .. code-block:: python

        P(x_1, ..., x_k) = a_0 + sum(a[i][j-1]*x_i**j for i in range(k) for j in range(1, n+1))

    No monomial mixes two variables.
"""

from __future__ import annotations

import math
import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as npoly
from typing_validation import validate

from spatialfair.errors import ConfigError, DimensionMismatchError, NonFiniteInputError
from spatialfair.geometry import FloatArray, Real, as_point, as_points, validate_norm_order
from .abstract import FairPolynomial, Structure
from .univariate import UnivariatePolynomial

class SeparablePolynomial(FairPolynomial):
    """
        Sum of ``k`` univariate polynomials of degree ``n`` without intercepts, plus a shared intercept.
        Entry ``(i, j-1)`` of ``components`` holds the coefficient of ``x_i**j``.

        >>> P = SeparablePolynomial(0.0, [[1/2**0.5], [1/2**0.5]])
        >>> float(P([[1.0, 1.0]])[0])
        1.4142135623730951

        :param intercept: the shared constant term
        :type intercept: :obj:`int` or :obj:`float`
        :param components: coefficient matrix of shape ``(k, n)``
        :type components: array-like

        :raises ConfigError: if ``k < 1`` or ``n < 1``
    """

    _intercept: float
    _components: FloatArray
    _coefficients: FloatArray

    def __init__(self, intercept: Real, components: npt.ArrayLike):
        validate(intercept, Real)
        comps = np.array(components, dtype=np.float64)
        if comps.ndim != 2 or comps.shape[0] < 1 or comps.shape[1] < 1:
            raise ConfigError(f"Components must be a non-empty matrix of shape (k, n), found shape {comps.shape}.")
        if not np.all(np.isfinite(comps)) or not math.isfinite(intercept):
            raise NonFiniteInputError("coefficients")
        self._intercept = float(intercept)
        comps.flags.writeable = False
        self._components = comps
        coeffs = np.concatenate(([self._intercept], comps.ravel()))
        coeffs.flags.writeable = False
        self._coefficients = coeffs

    @classmethod
    def from_coefficients(cls, coefficients: npt.ArrayLike, num_vars: int, degree: int) -> SeparablePolynomial:
        """
            Builds a separable polynomial from a flat coefficient vector laid out as in
            :attr:`~spatialfair.polynomial.abstract.FairPolynomial.coefficients`.

            :param coefficients: flat coefficient vector of length ``1+num_vars*degree``
            :type coefficients: array-like
            :param num_vars: number of variables ``k``
            :type num_vars: :obj:`int`
            :param degree: the degree ``n``
            :type degree: :obj:`int`
        """
        validate(num_vars, int)
        validate(degree, int)
        coeffs = np.asarray(coefficients, dtype=np.float64).ravel()
        if coeffs.size != 1+num_vars*degree:
            raise DimensionMismatchError(int(coeffs.size), 1+num_vars*degree)
        return cls(float(coeffs[0]), coeffs[1:].reshape(num_vars, degree))

    @property
    def structure(self) -> Structure:
        return "separable"

    @property
    def num_vars(self) -> int:
        return int(self._components.shape[0])

    @property
    def degree(self) -> int:
        return int(self._components.shape[1])

    @property
    def intercept(self) -> float:
        return self._intercept

    @property
    def components(self) -> FloatArray:
        """ Read-only coefficient matrix of shape ``(k, n)``. """
        return self._components

    @property
    def coefficients(self) -> FloatArray:
        return self._coefficients

    def component(self, var: int) -> UnivariatePolynomial:
        """
            The univariate component ``P_i`` for variable ``var`` (with zero constant term).

            :param var: the 0-based variable index
            :type var: :obj:`int`
        """
        validate(var, int)
        if not 0 <= var < self.num_vars:
            raise IndexError(f"Variable index {var} out of range for {self.num_vars} variables.")
        return UnivariatePolynomial(np.concatenate(([0.0], self._components[var])))

    def derivative_sums(self) -> FloatArray:
        """
            Per-variable weighted coefficient sums ``sum(j*abs(a[i][j-1]) for j in range(1, n+1))``.
        """
        powers = np.arange(1, self.degree+1)
        return np.asarray(np.abs(self._components)@powers, dtype=np.float64)

    def lipschitz_constant(self, p: Real = 2) -> float:
        # Hölder: sum(L_i*|x_i-y_i|) <= ||L||_q*||x-y||_p with 1/p+1/q = 1
        p = validate_norm_order(p)
        if p == 1.0:
            q = math.inf
        elif math.isinf(p):
            q = 1.0
        else:
            q = p/(p-1.0)
        return float(np.linalg.norm(self.derivative_sums(), ord=q))

    def evaluate(self, inputs: npt.ArrayLike) -> FloatArray:
        pts = as_points(inputs)
        if pts.shape[1] != self.num_vars:
            raise DimensionMismatchError(pts.shape[1], self.num_vars)
        out = np.full(pts.shape[0], self._intercept)
        for var in range(self.num_vars):
            coeffs = np.concatenate(([0.0], self._components[var]))
            out += npoly.polyval(pts[:, var], coeffs)
        return out

    def __repr__(self) -> str:
        return f"SeparablePolynomial({self._intercept}, {self._components.tolist()})"

def eval_separable(poly: SeparablePolynomial, point: npt.ArrayLike) -> float:
    """
        Evaluates a separable polynomial at a single point.

        >>> P = SeparablePolynomial(0.1, [[0.2, 0.1], [0.0, 0.3]])
        >>> eval_separable(P, [0.5, -1.0])
        0.525

        :param poly: the polynomial
        :type poly: :class:`SeparablePolynomial`
        :param point: the point, with ``k`` coordinates
        :type point: array-like

        :raises DimensionMismatchError: if the point dimension differs from ``k``
    """
    validate(poly, SeparablePolynomial)
    pt = as_point(point)
    if pt.size != poly.num_vars:
        raise DimensionMismatchError(int(pt.size), poly.num_vars)
    return float(poly.evaluate(pt[None, :])[0])
