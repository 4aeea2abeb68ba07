"""
    Coefficient box bounds which guarantee c-fairness, one class for each sufficient condition.

    Each variant turns a :class:`~spatialfair.bounds.config.FairnessConfig` into per-coefficient magnitudes ``B``,
    such that every polynomial with ``abs(a) <= B`` (intercept excluded) is c-fair on the normalized domain.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
import math
from typing import Any, Tuple
import numpy as np
import numpy.typing as npt
from typing_validation import validate

from spatialfair.errors import ConfigError, DimensionMismatchError
from spatialfair.geometry import FloatArray
from spatialfair.polynomial import ColumnSpec
from .config import FairnessConfig

class CoefficientBounds:
    """
        Per-coefficient lower and upper bounds, aligned with the design matrix columns.
        The intercept is unbounded, all other coefficients lie in a symmetric box ``[-B_i, B_i]`` with ``B_i > 0``.

        >>> bounds = CoefficientBounds([0.2, 0.4], ((0, 0), (0, 1), (0, 2)), "univariate")
        >>> bounds.lower
        array([-inf, -0.2, -0.4])

        :param magnitudes: the bounds ``B_i`` for the non-intercept coefficients, in column order
        :type magnitudes: array-like
        :param column_map: the ``(variable, power)`` pair for every column, intercept first
        :type column_map: :obj:`~typing.Tuple`\\ [:obj:`~typing.Tuple`\\ [:obj:`int`, :obj:`int`], ...]
        :param variant: the name of the variant which produced the bounds
        :type variant: :obj:`str`

        :raises ConfigError: if some magnitude is not strictly positive and finite
    """

    _magnitudes: FloatArray
    _column_map: Tuple[ColumnSpec, ...]
    _variant: str
    _lower: FloatArray
    _upper: FloatArray

    def __init__(self, magnitudes: npt.ArrayLike, column_map: Tuple[ColumnSpec, ...], variant: str):
        validate(column_map, Tuple[Tuple[int, int], ...])
        validate(variant, str)
        mags = np.array(magnitudes, dtype=np.float64).ravel()
        if mags.size+1 != len(column_map):
            raise DimensionMismatchError(int(mags.size)+1, len(column_map))
        if not np.all(np.isfinite(mags)) or not np.all(mags > 0):
            raise ConfigError("Coefficient bounds must be strictly positive and finite.")
        mags.flags.writeable = False
        self._magnitudes = mags
        self._column_map = column_map
        self._variant = variant
        upper = np.concatenate(([math.inf], mags))
        lower = -upper
        upper.flags.writeable = False
        lower.flags.writeable = False
        self._upper = upper
        self._lower = lower

    @property
    def magnitudes(self) -> FloatArray:
        """ The bounds ``B_i`` of the non-intercept coefficients. """
        return self._magnitudes

    @property
    def lower(self) -> FloatArray:
        """ Lower bounds for all coefficients, ``-inf`` for the intercept. """
        return self._lower

    @property
    def upper(self) -> FloatArray:
        """ Upper bounds for all coefficients, ``+inf`` for the intercept. """
        return self._upper

    @property
    def column_map(self) -> Tuple[ColumnSpec, ...]:
        """ The ``(variable, power)`` pair for every column. """
        return self._column_map

    @property
    def variant(self) -> str:
        """ The name of the variant which produced these bounds. """
        return self._variant

    @property
    def size(self) -> int:
        """ Number of coefficients, intercept included. """
        return len(self._column_map)

    def contains(self, coefficients: npt.ArrayLike) -> bool:
        """
            Whether the given coefficient vector lies within the bounds.

            :param coefficients: coefficient vector, intercept first
            :type coefficients: array-like
        """
        a = np.asarray(coefficients, dtype=np.float64).ravel()
        if a.size != self.size:
            raise DimensionMismatchError(int(a.size), self.size)
        return bool(np.all(self._lower <= a) and np.all(a <= self._upper))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, CoefficientBounds):
            return NotImplemented
        return self._variant == other._variant and self._column_map == other._column_map \
            and bool(np.array_equal(self._magnitudes, other._magnitudes))

    def __hash__(self) -> int:
        return hash((self._variant, self._column_map, tuple(self._magnitudes)))

    def __repr__(self) -> str:
        return f"CoefficientBounds({self._magnitudes.tolist()}, variant={repr(self._variant)})"

def sum_of_squares(n: int) -> int:
    """
        The sum ``1**2+2**2+...+n**2 = n*(n+1)*(2*n+1)/6``.

        >>> sum_of_squares(3)
        14
    """
    validate(n, int)
    return n*(n+1)*(2*n+1)//6

class BoundVariant(ABC):
    """
        Abstract superclass for sufficient conditions of c-fairness in box form.
        Subclasses decide which configurations they apply to, and compute the magnitudes.
    """

    @abstractmethod
    def applies(self, config: FairnessConfig) -> bool:
        """
            Whether this variant guarantees c-fairness for the given configuration.

            :param config: the fairness configuration
            :type config: :class:`~spatialfair.bounds.config.FairnessConfig`
        """

    @abstractmethod
    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        """
            The per-coefficient bounds ``B`` for the non-intercept coefficients, in column order.
            Only meaningful when :meth:`applies` returns :obj:`True`.

            :param config: the fairness configuration
            :type config: :class:`~spatialfair.bounds.config.FairnessConfig`
        """

    def bounds(self, config: FairnessConfig, name: str) -> CoefficientBounds:
        """
            The coefficient bounds for the given configuration, labelled with the given name.

            :raises ConfigError: if the variant does not apply to the configuration
        """
        validate(config, FairnessConfig)
        validate(name, str)
        if not self.applies(config):
            raise ConfigError(f"Bound variant {repr(name)} does not apply to {config}.")
        return CoefficientBounds(self.magnitudes(config), config.column_map, name)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

class UnivariateBound(BoundVariant):
    """
        Single-variable polynomials: ``abs(a_i) <= 6*i*c/(n*(n+1)*(2*n+1))``.
        At these values the derivative bound ``sum(i*abs(a_i))`` equals exactly ``c``.
    """

    def applies(self, config: FairnessConfig) -> bool:
        return config.dimension == 1

    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        n = config.degree
        powers = np.arange(1, n+1, dtype=np.float64)
        return np.asarray(powers*config.c/sum_of_squares(n), dtype=np.float64)

class PlanarEuclideanLinearBound(BoundVariant):
    """
        Linear polynomials of two variables under the Euclidean norm: ``abs(a_1), abs(a_2) <= c/sqrt(2)``.
    """

    def applies(self, config: FairnessConfig) -> bool:
        return config.dimension == 2 and config.p == 2.0 and config.degree == 1

    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        return np.full(2, config.c/math.sqrt(2))

class EuclideanLinearBound(BoundVariant):
    """
        Linear polynomials of ``k`` variables under the Euclidean norm: ``abs(a_i) <= c/sqrt(k)``.
    """

    def applies(self, config: FairnessConfig) -> bool:
        return config.p == 2.0 and config.degree == 1

    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        k = config.dimension
        return np.full(k, config.c/math.sqrt(k))

class MinkowskiLinearBound(BoundVariant):
    """
        Linear polynomials of ``k`` variables under a ``p``-norm: ``abs(a_i) <= c/k**((p-1)/p)``.
    """

    def applies(self, config: FairnessConfig) -> bool:
        return config.degree == 1

    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        return np.full(config.dimension, config.c/config.dimension_factor)

class SeparableBound(BoundVariant):
    """
        Separable polynomials of ``k`` variables and degree ``n`` under a ``p``-norm:

        .. code-block:: python

            abs(a[i][j-1]) <= 6*j*c/(n*(n+1)*(2*n+1)*k**((p-1)/p))

        For each variable, the derivative bound ``sum(j*abs(a[i][j-1]))`` is then ``c/k**((p-1)/p)``,
        so that the Hölder inequality bounds the change of the polynomial by ``c`` times the ``p``-norm distance.
    """

    def applies(self, config: FairnessConfig) -> bool:
        return True

    def magnitudes(self, config: FairnessConfig) -> FloatArray:
        n = config.degree
        powers = np.arange(1, n+1, dtype=np.float64)
        per_var = powers*config.c/(sum_of_squares(n)*config.dimension_factor)
        return np.asarray(np.tile(per_var, config.dimension), dtype=np.float64)
