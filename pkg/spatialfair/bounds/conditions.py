"""
    Nonlinear sufficient conditions for c-fairness, checked directly on polynomial coefficients.
"""

from __future__ import annotations

from typing import Tuple
import numpy as np
import numpy.typing as npt
from typing_extensions import Final
from typing_validation import validate

from spatialfair.errors import ConfigError, DimensionMismatchError, InputError
from spatialfair.geometry import Real
from spatialfair.polynomial import SeparablePolynomial, UnivariatePolynomial
from .config import FairnessConfig

CONDITION_TOLERANCE: Final = 1e-9
""" Absolute slack granted when checking a condition. """

def check_nonlinear_condition(poly: UnivariatePolynomial, c: Real) -> Tuple[bool, float]:
    """
        Checks the condition ``sum(i*abs(a_i) for i in range(1, n+1)) <= c``, which bounds the derivative
        of the polynomial by ``c`` on ``[-1, 1]``. Returns whether the condition holds (up to ``1e-9``)
        together with the slack ``c-sum(i*abs(a_i))``.

        >>> check_nonlinear_condition(UnivariatePolynomial([0.0, 0.6, 0.3]), 1)
        (False, -0.19999999999999996)

        :param poly: the polynomial
        :type poly: :class:`~spatialfair.polynomial.univariate.UnivariatePolynomial`
        :param c: the fairness constant
        :type c: :obj:`int` or :obj:`float`
    """
    validate(poly, UnivariatePolynomial)
    validate(c, Real)
    total = poly.derivative_sum()
    return total <= c+CONDITION_TOLERANCE, float(c)-total

def check_separable_condition(poly: SeparablePolynomial, config: FairnessConfig) -> Tuple[bool, Tuple[float, ...]]:
    r"""
        Checks, independently for each variable ``i``, the condition

        .. code-block:: python

            sum(j*abs(a[i][j-1]) for j in range(1, n+1)) <= c/k**((p-1)/p)

        Returns whether all variables pass (up to ``1e-9``) together with the per-variable slacks.

        :param poly: the polynomial
        :type poly: :class:`~spatialfair.polynomial.separable.SeparablePolynomial`
        :param config: the fairness configuration
        :type config: :class:`~spatialfair.bounds.config.FairnessConfig`

        :raises DimensionMismatchError: if the polynomial has a different number of variables than the configuration
        :raises ConfigError: if the polynomial has a different degree than the configuration
    """
    validate(poly, SeparablePolynomial)
    validate(config, FairnessConfig)
    if poly.num_vars != config.dimension:
        raise DimensionMismatchError(poly.num_vars, config.dimension)
    if poly.degree != config.degree:
        raise ConfigError(f"Polynomial degree {poly.degree} differs from configured degree {config.degree}.")
    limit = config.c/config.dimension_factor
    slacks = tuple(float(limit-s) for s in poly.derivative_sums())
    return all(s >= -CONDITION_TOLERANCE for s in slacks), slacks

def generalized_titu_gap(numerators: npt.ArrayLike, denominators: npt.ArrayLike, power: int) -> float:
    """
        The gap between the two sides of the inequality

        .. code-block:: python

            len(a)**(m-2)*sum(a_i**m/x_i) >= sum(a)**m/sum(x)

        which holds for non-negative ``a``, positive ``x`` and integer ``m >= 2``.
        The returned value ``lhs-rhs`` is non-negative up to roundoff.

        >>> generalized_titu_gap([1.0, 1.0], [1.0, 1.0], 2)
        0.0

        :param numerators: the values ``a_i >= 0``
        :type numerators: array-like
        :param denominators: the values ``x_i > 0``
        :type denominators: array-like
        :param power: the exponent ``m >= 2``
        :type power: :obj:`int`

        :raises InputError: if the inputs are empty, misaligned, or out of range
        :raises ConfigError: if ``power < 2``
    """
    validate(power, int)
    if power < 2:
        raise ConfigError(f"Exponent must be at least 2, found {power}.")
    a = np.asarray(numerators, dtype=np.float64).ravel()
    x = np.asarray(denominators, dtype=np.float64).ravel()
    if a.size == 0 or a.size != x.size:
        raise InputError(f"Expected non-empty aligned inputs, found lengths {a.size} and {x.size}.")
    if np.any(a < 0) or np.any(x <= 0):
        raise InputError("Numerators must be non-negative and denominators strictly positive.")
    lhs = float(a.size**(power-2)*np.sum(a**power/x))
    rhs = float(np.sum(a)**power/np.sum(x))
    return lhs-rhs
