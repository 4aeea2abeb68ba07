"""
    Module containing coefficient bounds which guarantee c-fairness, and a registry of the sufficient
    conditions they are derived from.

    Bounds for a configuration are obtained with :func:`derive_bounds`:

    >>> from spatialfair.bounds import FairnessConfig, derive_bounds
    >>> derive_bounds(FairnessConfig(1, 2))
    CoefficientBounds([0.2, 0.4], variant='univariate')

"""

from __future__ import annotations

import logging
import re
from typing import Dict, Iterator, List, Optional, Tuple
from typing_validation import validate

from .config import FairnessConfig as FairnessConfig, dimension_factor as dimension_factor
from .variants import BoundVariant as BoundVariant, CoefficientBounds as CoefficientBounds
from .variants import UnivariateBound, PlanarEuclideanLinearBound, EuclideanLinearBound, MinkowskiLinearBound, SeparableBound
from .variants import sum_of_squares as sum_of_squares
from .conditions import check_nonlinear_condition as check_nonlinear_condition
from .conditions import check_separable_condition as check_separable_condition
from .conditions import generalized_titu_gap as generalized_titu_gap

_log = logging.getLogger(__name__)

# registration order is specificity order, most specific first
_variants: Dict[str, BoundVariant] = {}

def get(name: str) -> BoundVariant:
    """
        Gets a bound variant by name.

        >>> bounds.get("univariate")
        UnivariateBound()

        :param name: the variant name
        :type name: :obj:`str`

        :raises KeyError: if a variant by the given name does not exist
    """
    validate(name, str)
    if name not in _variants:
        raise KeyError(f"Bound variant named {repr(name)} does not exist.")
    return _variants[name]

def has(name: str) -> bool:
    """
        Checks whether a bound variant with the given name exists.

        :param name: the variant name
        :type name: :obj:`str`
    """
    validate(name, str)
    return name in _variants

def register(**variants: BoundVariant) -> None:
    r"""
        Registers any number of new bound variants by name. Later registrations count as less
        specific than earlier ones when breaking ties in :func:`derive_bounds`.

        Variant names must conform with:

        .. code-block:: python

            re.match(r"^[a-z][a-z0-9_]*$", name)

        :param variants: the variants to register, passed by desired registration name
        :type variants: :obj:`~typing.Dict`\ [:obj:`str`, :class:`~spatialfair.bounds.variants.BoundVariant`]

        :raises ValueError: if the name is invalid, or a variant with one of the given names already exists
    """
    for arg in variants.values():
        validate(arg, BoundVariant)
    for name, variant in variants.items():
        if not re.match(r"^[a-z][a-z0-9_]*$", name):
            raise ValueError(f"Invalid bound variant name {repr(name)}")
        if name in _variants:
            raise ValueError(f"Bound variant named {repr(name)} already exists.")
        _variants[name] = variant

def unregister(*names: str) -> None:
    r"""
        Unregisters any number of existing bound variants by name.

        :param names: the variant names
        :type names: :obj:`~typing.Tuple`\ [:obj:`str`, ...]

        :raises KeyError: if a variant with one of the given names does not exist
    """
    for name in names:
        validate(name, str)
    for name in names:
        if name not in _variants:
            raise KeyError(f"Bound variant named {repr(name)} does not exist.")
        del _variants[name]

def table(*, prefix: str = "") -> Iterator[Tuple[str, BoundVariant]]:
    """
        Iterates over all registered variants in registration order, optionally restricting to those with given prefix.

        >>> [name for name, _ in bounds.table(prefix="euclidean")]
        ['euclidean_linear']

        :param prefix: optional prefix to filter by when listing variants
        :type prefix: :obj:`str`, *optional*
    """
    validate(prefix, str)
    return iter([(name, variant) for name, variant in _variants.items() if name.startswith(prefix)])

def candidates(config: FairnessConfig) -> List[CoefficientBounds]:
    r"""
        The bounds produced by every registered variant which applies to the given configuration,
        in registration order.

        :param config: the fairness configuration
        :type config: :class:`~spatialfair.bounds.config.FairnessConfig`
    """
    validate(config, FairnessConfig)
    return [variant.bounds(config, name) for name, variant in _variants.items() if variant.applies(config)]

def derive_bounds(config: FairnessConfig) -> CoefficientBounds:
    """
        Derives coefficient bounds which guarantee c-fairness for the given configuration.

        Among the applicable variants, the one with the largest box is chosen, where boxes are compared
        by the sum of their magnitudes. Boxes equal up to a relative ``1e-12`` are tied, and ties are
        broken in favour of the variant registered first (the most specific one).

        >>> derive_bounds(FairnessConfig(1, 1, dimension=2, p=2, mode="zone"))
        CoefficientBounds([0.7071067811865475, 0.7071067811865475], variant='planar_euclidean_linear')

        :param config: the fairness configuration
        :type config: :class:`~spatialfair.bounds.config.FairnessConfig`

        :raises LookupError: if no registered variant applies
    """
    validate(config, FairnessConfig)
    best: Optional[CoefficientBounds] = None
    best_size = 0.0
    for bounds in candidates(config):
        size = float(bounds.magnitudes.sum())
        _log.debug("Variant %r applies to %r with box size %.17g", bounds.variant, config, size)
        if best is None or size > best_size*(1+1e-12):
            best, best_size = bounds, size
    if best is None:
        raise LookupError(f"No bound variant applies to {config}.")
    _log.debug("Selected variant %r for %r", best.variant, config)
    return best

register(
    univariate=UnivariateBound(),
    planar_euclidean_linear=PlanarEuclideanLinearBound(),
    euclidean_linear=EuclideanLinearBound(),
    minkowski_linear=MinkowskiLinearBound(),
    separable=SeparableBound(),
)
