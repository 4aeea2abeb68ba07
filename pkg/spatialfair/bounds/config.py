"""
    Fairness configurations: the constant ``c``, the degree ``n``, the dimension ``k``,
    the norm order ``p`` and the fairness mode.
"""

from __future__ import annotations

import math
from typing import Any, Dict, Mapping, Tuple
from typing_validation import validate

from spatialfair.errors import ConfigError
from spatialfair.geometry import Real, decode_norm_order, encode_norm_order, validate_norm_order
from spatialfair.metrics import Mode, validate_c, validate_mode
from spatialfair.polynomial import ColumnSpec, Structure, column_map

class FairnessConfig:
    """
        Immutable fairness configuration.

        Distance-based configurations always have dimension ``k = 1``:

        >>> FairnessConfig(1, 3)
        FairnessConfig(c=1.0, degree=3)
        >>> FairnessConfig(2, 1, dimension=2, mode="zone")
        FairnessConfig(c=2.0, degree=1, dimension=2, mode='zone')

        :param c: the fairness constant, ``c >= 1``
        :type c: :obj:`int` or :obj:`float`
        :param degree: the polynomial degree ``n >= 1``
        :type degree: :obj:`int`
        :param dimension: the number of input variables ``k >= 1``
        :type dimension: :obj:`int`, *optional*
        :param p: the norm order, ``p >= 1`` (``math.inf`` allowed)
        :type p: :obj:`int` or :obj:`float`, *optional*
        :param mode: the fairness mode
        :type mode: ``"distance"`` or ``"zone"``, *optional*

        :raises ConfigError: if some value is out of range, or if ``mode="distance"`` and ``dimension != 1``
    """

    _c: float
    _degree: int
    _dimension: int
    _p: float
    _mode: Mode

    def __init__(self, c: Real, degree: int, *, dimension: int = 1, p: Real = 2, mode: str = "distance"):
        validate(c, Real)
        validate(degree, int)
        validate(dimension, int)
        validate(p, Real)
        validate(mode, str)
        self._c = validate_c(c)
        if degree < 1:
            raise ConfigError(f"Degree must be at least 1, found {degree}.")
        if dimension < 1:
            raise ConfigError(f"Dimension must be at least 1, found {dimension}.")
        self._p = validate_norm_order(p)
        self._mode = validate_mode(mode)
        if self._mode == "distance" and dimension != 1:
            raise ConfigError(f"Distance-based fairness has dimension 1, found {dimension}.")
        self._degree = degree
        self._dimension = dimension

    @property
    def c(self) -> float:
        """ The fairness constant. """
        return self._c

    @property
    def degree(self) -> int:
        """ The polynomial degree ``n``. """
        return self._degree

    @property
    def dimension(self) -> int:
        """ The number of input variables ``k``. """
        return self._dimension

    @property
    def p(self) -> float:
        """ The norm order. """
        return self._p

    @property
    def mode(self) -> Mode:
        """ The fairness mode. """
        return self._mode

    @property
    def structure(self) -> Structure:
        """
            The structure of the polynomials fitted under this configuration:
            univariate for distance-based fairness, separable for zone-based fairness.
        """
        return "univariate" if self._mode == "distance" else "separable"

    @property
    def column_map(self) -> Tuple[ColumnSpec, ...]:
        """ The ``(variable, power)`` pair of each coefficient. """
        return column_map(self.structure, self._dimension, self._degree)

    @property
    def dimension_factor(self) -> float:
        """
            The factor ``k**((p-1)/p)`` by which multivariate bounds shrink, read as ``k`` when ``p`` is infinite.

            >>> FairnessConfig(1, 1, dimension=4, p=2, mode="zone").dimension_factor
            2.0
        """
        return dimension_factor(self._dimension, self._p)

    def options(self, skip_defaults: bool = False) -> Mapping[str, Any]:
        """
            The options used to construct this configuration.

            >>> FairnessConfig(5, 2).options(skip_defaults=True)
            {'c': 5.0, 'degree': 2}

            :param skip_defaults: if set to :obj:`True`, only options with non-default values are included
                                  (``c`` and ``degree`` are always included)
            :type skip_defaults: :obj:`bool`, *optional*
        """
        validate(skip_defaults, bool)
        options: Dict[str, Any] = {"c": self._c, "degree": self._degree}
        if not skip_defaults or self._dimension != 1:
            options["dimension"] = self._dimension
        if not skip_defaults or self._p != 2.0:
            options["p"] = self._p
        if not skip_defaults or self._mode != "distance":
            options["mode"] = self._mode
        return options

    def with_options(self, **options: Any) -> FairnessConfig:
        r"""
            Returns a new configuration with the given options changed.

            >>> FairnessConfig(1, 3).with_options(c=4)
            FairnessConfig(c=4.0, degree=3)

            :param options: options to set for the new configuration
            :type options: :obj:`~typing.Dict`\ [:obj:`str`, :obj:`~typing.Any`]

            :raises KeyError: if some option name is unknown
        """
        new_options = {**self.options()}
        for name in options:
            if name not in new_options:
                raise KeyError(f"Unknown option {repr(name)} for {type(self).__name__}")
        new_options.update(options)
        c = new_options.pop("c")
        degree = new_options.pop("degree")
        return FairnessConfig(c, degree, **new_options)

    def to_dict(self) -> Dict[str, Any]:
        """ Plain-data representation, with infinite ``p`` encoded as ``"inf"``. """
        return {"mode": self._mode, "k": self._dimension, "p": encode_norm_order(self._p),
                "n": self._degree, "c": self._c}

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> FairnessConfig:
        r"""
            Inverse of :meth:`to_dict`.

            :param data: the plain-data representation
            :type data: :obj:`~typing.Mapping`\ [:obj:`str`, :obj:`~typing.Any`]
        """
        validate(data, Mapping[str, Any])
        return FairnessConfig(float(data["c"]), int(data["n"]), dimension=int(data["k"]),
                              p=decode_norm_order(data["p"]), mode=str(data["mode"]))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FairnessConfig):
            return NotImplemented
        return self.options() == other.options()

    def __hash__(self) -> int:
        return hash((type(self), tuple(self.options().items())))

    def __repr__(self) -> str:
        options = self.options(skip_defaults=True)
        options_str = ", ".join(f"{name}={repr(value)}" for name, value in options.items())
        return f"FairnessConfig({options_str})"

def dimension_factor(dimension: int, p: Real = 2) -> float:
    """
        The factor ``k**((p-1)/p)``, equal to the ``q``-norm of the all-ones vector in ``k`` dimensions
        (where ``1/p+1/q = 1``). When ``p`` is infinite, the factor is ``k``.

        >>> dimension_factor(2, 2)
        1.4142135623730951
        >>> dimension_factor(3, math.inf)
        3.0

        :param dimension: the number of variables ``k``
        :type dimension: :obj:`int`
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`, *optional*
    """
    validate(dimension, int)
    validate(p, Real)
    p = validate_norm_order(p)
    if dimension < 1:
        raise ConfigError(f"Dimension must be at least 1, found {dimension}.")
    if math.isinf(p):
        return float(dimension)
    return float(dimension**((p-1.0)/p))
