"""
    Single-variable polynomials ``P(x) = a_0 + a_1 x + ... + a_n x^n``, used for distance-based fairness.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as npoly
from typing_validation import validate

from spatialfair.errors import ConfigError, InputError, NonFiniteInputError
from spatialfair.geometry import FloatArray, Real
from .abstract import FairPolynomial, Structure

class UnivariatePolynomial(FairPolynomial):
    """
        Single-variable polynomial of degree ``n >= 1``, specified by its coefficients ``(a_0, ..., a_n)``.

        >>> P = UnivariatePolynomial([0.1, 0.2, 0.3])
        >>> P.degree
        2
        >>> float(P(-1.0))
        0.2

        :param coefficients: the coefficients, constant term first
        :type coefficients: array-like

        :raises ConfigError: if fewer than two coefficients are given
        :raises NonFiniteInputError: if some coefficient is not finite
    """

    _coefficients: FloatArray

    def __init__(self, coefficients: npt.ArrayLike):
        coeffs = np.array(coefficients, dtype=np.float64).ravel()
        if coeffs.size < 2:
            raise ConfigError("Univariate polynomials must have degree at least 1.")
        if not np.all(np.isfinite(coeffs)):
            raise NonFiniteInputError("coefficients")
        coeffs.flags.writeable = False
        self._coefficients = coeffs

    @classmethod
    def lipschitz_family(cls, c: Real, n: int) -> UnivariatePolynomial:
        """
            The polynomial ``P(x) = c*x**n/n``, which satisfies ``abs(P(x)-P(y)) <= c*abs(x-y)``
            for all ``x, y`` in ``[-1, 1]``.

            >>> UnivariatePolynomial.lipschitz_family(1, 2)
            UnivariatePolynomial([0.0, 0.0, 0.5])

            :param c: the fairness constant
            :type c: :obj:`int` or :obj:`float`
            :param n: the degree
            :type n: :obj:`int`
        """
        validate(c, Real)
        validate(n, int)
        if n < 1:
            raise ConfigError(f"Degree must be at least 1, found {n}.")
        coeffs = np.zeros(n+1)
        coeffs[n] = c/n
        return cls(coeffs)

    @property
    def structure(self) -> Structure:
        return "univariate"

    @property
    def num_vars(self) -> int:
        return 1

    @property
    def degree(self) -> int:
        return int(self._coefficients.size-1)

    @property
    def intercept(self) -> float:
        return float(self._coefficients[0])

    @property
    def coefficients(self) -> FloatArray:
        return self._coefficients

    def derivative_sum(self) -> float:
        """
            The weighted coefficient sum ``sum(i*abs(a_i) for i in range(1, n+1))``,
            which bounds ``abs(P'(x))`` on ``[-1, 1]``.
        """
        powers = np.arange(1, self.degree+1)
        return float(np.sum(powers*np.abs(self._coefficients[1:])))

    def lipschitz_constant(self, p: Real = 2) -> float:
        # in one dimension every p-norm distance is abs(x-y)
        return self.derivative_sum()

    def evaluate(self, inputs: npt.ArrayLike) -> FloatArray:
        x = np.asarray(inputs, dtype=np.float64)
        if x.ndim == 2 and x.shape[1] == 1:
            x = x[:, 0]
        if x.ndim > 1:
            raise InputError(f"Univariate polynomials take scalar inputs, found array of shape {x.shape}.")
        return np.asarray(npoly.polyval(x, self._coefficients), dtype=np.float64)

    def __repr__(self) -> str:
        return f"UnivariatePolynomial({[float(a) for a in self._coefficients]})"

def eval_univariate(poly: UnivariatePolynomial, x: Real) -> float:
    """
        Evaluates a univariate polynomial at a single point, by Horner's scheme.
        No range check is performed: fairness bounds only hold for ``abs(x) <= 1``.

        >>> eval_univariate(UnivariatePolynomial([0.1, 0.2, 0.3]), -1)
        0.2

        :param poly: the polynomial
        :type poly: :class:`UnivariatePolynomial`
        :param x: the input
        :type x: :obj:`int` or :obj:`float`
    """
    validate(poly, UnivariatePolynomial)
    validate(x, Real)
    return float(npoly.polyval(float(x), poly.coefficients))
