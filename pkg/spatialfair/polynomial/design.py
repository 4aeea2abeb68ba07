"""
    Least squares design matrices for fair polynomials.

    For univariate polynomials, row ``i`` of the design matrix is the Vandermonde row ``(1, l_i, l_i**2, ..., l_i**n)``.
    For separable polynomials of ``k`` variables, row ``i`` is ``(1, x_1, ..., x_1**n, x_2, ..., x_k**n)``.
    In both cases the residual of a coefficient vector ``a`` against a score vector ``b`` is ``L@a-b``.
"""

from __future__ import annotations

from typing import Tuple, Union
import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as npoly
from typing_extensions import Final
from typing_validation import validate

from spatialfair.errors import ConfigError, DimensionMismatchError, InputError, UnnormalizedInputError
from spatialfair.geometry import DtRVector, FloatArray, as_points
from .abstract import ColumnSpec, FairPolynomial, Structure, column_map, structures
from .univariate import UnivariatePolynomial
from .separable import SeparablePolynomial

NORMALIZATION_SLACK: Final = 1e-12
""" Inputs may exceed ``[-1, 1]`` by at most this amount before being rejected as unnormalized. """

class DesignMatrix:
    """
        Dense design matrix of shape ``(m, q)``, together with the ``(variable, power)`` pair encoded by each column.
        Instances are built by :func:`build_design_matrix`.

        :param matrix: the matrix entries
        :type matrix: array-like
        :param structure: the polynomial structure
        :type structure: ``"univariate"`` or ``"separable"``
        :param num_vars: number of variables ``k``
        :type num_vars: :obj:`int`
        :param degree: the degree ``n``
        :type degree: :obj:`int`
    """

    _matrix: FloatArray
    _structure: Structure
    _num_vars: int
    _degree: int
    _column_map: Tuple[ColumnSpec, ...]

    def __init__(self, matrix: npt.ArrayLike, structure: Structure, num_vars: int, degree: int):
        validate(num_vars, int)
        validate(degree, int)
        mat = np.array(matrix, dtype=np.float64)
        self._column_map = column_map(structure, num_vars, degree)
        if mat.ndim != 2 or mat.shape[1] != len(self._column_map):
            raise InputError(f"Design matrix of shape {mat.shape} does not have {len(self._column_map)} columns.")
        mat.flags.writeable = False
        self._matrix = mat
        self._structure = structure
        self._num_vars = num_vars
        self._degree = degree

    @property
    def matrix(self) -> FloatArray:
        """ The read-only matrix entries. """
        return self._matrix

    @property
    def rows(self) -> int:
        """ Number of rows ``m``. """
        return int(self._matrix.shape[0])

    @property
    def columns(self) -> int:
        """ Number of columns ``q``. """
        return int(self._matrix.shape[1])

    @property
    def structure(self) -> Structure:
        """ The polynomial structure. """
        return self._structure

    @property
    def num_vars(self) -> int:
        """ Number of variables ``k``. """
        return self._num_vars

    @property
    def degree(self) -> int:
        """ The degree ``n``. """
        return self._degree

    @property
    def column_map(self) -> Tuple[ColumnSpec, ...]:
        """ The ``(variable, power)`` pair encoded by each column, intercept first as ``(0, 0)``. """
        return self._column_map

    def predict(self, coefficients: npt.ArrayLike) -> FloatArray:
        """
            The product ``L@a``, i.e. the polynomial with coefficients ``a`` evaluated at every row.

            :param coefficients: coefficient vector of length ``q``
            :type coefficients: array-like
        """
        a = np.asarray(coefficients, dtype=np.float64).ravel()
        if a.size != self.columns:
            raise DimensionMismatchError(int(a.size), self.columns)
        return np.asarray(self._matrix@a, dtype=np.float64)

    def polynomial(self, coefficients: npt.ArrayLike) -> FairPolynomial:
        """
            The polynomial with the given coefficient vector, with this matrix's structure, degree and number of variables.

            :param coefficients: coefficient vector of length ``q``
            :type coefficients: array-like
        """
        a = np.asarray(coefficients, dtype=np.float64).ravel()
        if a.size != self.columns:
            raise DimensionMismatchError(int(a.size), self.columns)
        if self._structure == "univariate":
            return UnivariatePolynomial(a)
        return SeparablePolynomial.from_coefficients(a, self._num_vars, self._degree)

    def __repr__(self) -> str:
        return f"DesignMatrix(<{self.rows}x{self.columns}>, structure={repr(self._structure)}, " \
               f"k={self._num_vars}, n={self._degree})"

def build_design_matrix(inputs: Union[DtRVector, npt.ArrayLike], degree: int,
                        structure: str = "univariate") -> DesignMatrix:
    """
        Builds the least squares design matrix for a fair polynomial of the given degree and structure.

        >>> build_design_matrix([0.5], 2).matrix
        array([[1.  , 0.5 , 0.25]])

        :param inputs: DtR values (univariate) or normalized points of shape ``(m, k)`` (separable)
        :type inputs: :class:`~spatialfair.geometry.DtRVector` or array-like
        :param degree: the degree ``n``
        :type degree: :obj:`int`
        :param structure: the polynomial structure
        :type structure: ``"univariate"`` or ``"separable"``, *optional*

        :raises ConfigError: if ``degree < 1`` or the structure is unknown
        :raises UnnormalizedInputError: if some input lies outside ``[-1, 1]`` (beyond a ``1e-12`` slack)
    """
    validate(degree, int)
    validate(structure, str)
    if degree < 1:
        raise ConfigError(f"Degree must be at least 1, found {degree}.")
    if structure not in structures:
        raise ConfigError(f"Structure {repr(structure)} not supported, expected one of {structures}.")
    if isinstance(inputs, DtRVector):
        inputs = inputs.distances
    pts = as_points(inputs, "inputs")
    outside = np.abs(pts) > 1.0+NORMALIZATION_SLACK
    if np.any(outside):
        raise UnnormalizedInputError(float(pts[outside][0]))
    if structure == "univariate":
        if pts.shape[1] != 1:
            raise InputError(f"Univariate design matrices take scalar inputs, found dimension {pts.shape[1]}.")
        return DesignMatrix(npoly.polyvander(pts[:, 0], degree), "univariate", 1, degree)
    num_vars = pts.shape[1]
    blocks = [np.ones((pts.shape[0], 1))]
    blocks.extend(npoly.polyvander(pts[:, var], degree)[:, 1:] for var in range(num_vars))
    return DesignMatrix(np.hstack(blocks), "separable", num_vars, degree)
