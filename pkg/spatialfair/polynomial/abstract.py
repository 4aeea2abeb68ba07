"""
    Abstract fair polynomials.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple
import numpy as np
import numpy.typing as npt
from typing_extensions import Final, Literal

from spatialfair.geometry import FloatArray, Real

Structure = Literal["univariate", "separable"]
""" Polynomial structure: a single-variable polynomial or a sum of single-variable polynomials. """

structures: Final = ("univariate", "separable")
""" Tuple of valid structures (for use in validation). """

ColumnSpec = Tuple[int, int]
r"""
    Type alias for the ``(variable, power)`` pair encoded by a coefficient (or design matrix column).
    Variables are 0-based, and the intercept is encoded as ``(0, 0)``.
"""

class FairPolynomial(ABC):
    """
        Abstract superclass for polynomials in the power basis whose coefficients are fitted under
        fairness bounds. Coefficients are exposed as a flat vector, aligned with the columns of the
        design matrix for the same structure, degree and number of variables:
        the intercept comes first, followed by the powers ``1, ..., n`` of each variable in turn.
    """

    @property
    @abstractmethod
    def structure(self) -> Structure:
        """ The polynomial structure. """

    @property
    @abstractmethod
    def num_vars(self) -> int:
        """ Number of variables ``k``. """

    @property
    @abstractmethod
    def degree(self) -> int:
        """ The degree ``n`` (per variable, for separable polynomials). """

    @property
    @abstractmethod
    def intercept(self) -> float:
        """ The constant term ``a_0``. """

    @property
    @abstractmethod
    def coefficients(self) -> FloatArray:
        """ Flat read-only coefficient vector, intercept first. """

    @abstractmethod
    def evaluate(self, inputs: npt.ArrayLike) -> FloatArray:
        """
            Evaluates the polynomial at a collection of inputs.

            :param inputs: scalar inputs of shape ``(m,)`` for univariate polynomials,
                           points of shape ``(m, k)`` for separable polynomials
            :type inputs: array-like
        """

    @abstractmethod
    def lipschitz_constant(self, p: Real = 2) -> float:
        """
            A constant ``L`` such that ``abs(P(x)-P(y)) <= L*d(x, y)`` for all inputs in ``[-1, 1]``
            (per coordinate), where ``d`` is the ``p``-norm distance.

            :param p: the norm order
            :type p: :obj:`int` or :obj:`float`, *optional*
        """

    @property
    def column_map(self) -> Tuple[ColumnSpec, ...]:
        """
            The ``(variable, power)`` pair for each entry of :attr:`coefficients`.
        """
        return column_map(self.structure, self.num_vars, self.degree)

    def to_dict(self) -> Dict[str, Any]:
        """ Plain-data representation, used by model files. """
        return {"structure": self.structure, "num_vars": self.num_vars, "degree": self.degree,
                "coefficients": [float(a) for a in self.coefficients]}

    def __call__(self, inputs: npt.ArrayLike) -> FloatArray:
        return self.evaluate(inputs)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FairPolynomial):
            return NotImplemented
        if type(self) != type(other): # pylint: disable = unidiomatic-typecheck
            return NotImplemented
        return (self.num_vars, self.degree) == (other.num_vars, other.degree) \
            and bool(np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self) -> int:
        return hash((type(self), self.num_vars, self.degree, tuple(self.coefficients)))

def column_map(structure: Structure, num_vars: int, degree: int) -> Tuple[ColumnSpec, ...]:
    """
        The ``(variable, power)`` pairs for the coefficients of a polynomial with given structure,
        number of variables and degree.

        >>> column_map("separable", 2, 2)
        ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2))

        :param structure: the polynomial structure
        :type structure: ``"univariate"`` or ``"separable"``
        :param num_vars: number of variables (must be ``1`` for univariate polynomials)
        :type num_vars: :obj:`int`
        :param degree: the degree
        :type degree: :obj:`int`
    """
    if structure == "univariate":
        if num_vars != 1:
            raise ValueError("Univariate polynomials have exactly one variable.")
    elif structure != "separable":
        raise ValueError(f"Structure {repr(structure)} not supported, expected one of {structures}.")
    return ((0, 0),)+tuple((var, power) for var in range(num_vars) for power in range(1, degree+1))
