"""
    Module containing classes for fair polynomials and their least squares design matrices.

    >>> from spatialfair.polynomial import UnivariatePolynomial, build_design_matrix
    >>> P = UnivariatePolynomial.lipschitz_family(1, 2)
    >>> P
    UnivariatePolynomial([0.0, 0.0, 0.5])
    >>> L = build_design_matrix([0.0, 0.5, 1.0], 2)
    >>> L.predict(P.coefficients)
    array([0.   , 0.125, 0.5  ])

"""

from __future__ import annotations

from typing import Any, Mapping
from typing_validation import validate

from .abstract import FairPolynomial as FairPolynomial, ColumnSpec as ColumnSpec, Structure as Structure
from .abstract import column_map as column_map, structures as structures
from .univariate import UnivariatePolynomial as UnivariatePolynomial, eval_univariate as eval_univariate
from .separable import SeparablePolynomial as SeparablePolynomial, eval_separable as eval_separable
from .design import DesignMatrix as DesignMatrix, build_design_matrix as build_design_matrix

def from_dict(data: Mapping[str, Any]) -> FairPolynomial:
    r"""
        Reconstructs a polynomial from the plain-data representation produced by
        :meth:`~spatialfair.polynomial.abstract.FairPolynomial.to_dict`.

        :param data: the plain-data representation
        :type data: :obj:`~typing.Mapping`\ [:obj:`str`, :obj:`~typing.Any`]

        :raises ValueError: if the structure is unknown
    """
    validate(data, Mapping[str, Any])
    structure = data["structure"]
    if structure == "univariate":
        return UnivariatePolynomial(data["coefficients"])
    if structure == "separable":
        return SeparablePolynomial.from_coefficients(data["coefficients"], int(data["num_vars"]), int(data["degree"]))
    raise ValueError(f"Structure {repr(structure)} not supported, expected one of {structures}.")
