"""
    Functions to generate random data: DtR vectors, normalized coordinates, likelihood scores,
    scored datasets and coefficient vectors within fairness bounds.
"""

from __future__ import annotations

# pylint: disable = global-statement

from contextlib import contextmanager
import math
from types import MappingProxyType
from typing import Any, Dict, Iterator, Mapping, Optional
import numpy as np
import numpy.typing as npt
from typing_validation import validate

from .bounds import CoefficientBounds
from .errors import ConfigError
from .geometry import DtRVector, FloatArray, Real, as_points, compute_dtr
from .metrics import ScoredDataset, validate_mode

_default_options: Mapping[str, Any] = MappingProxyType({
    "min_points": 2,
    "max_points": 64,
    "min_dim": 2,
    "max_dim": 3,
})

_options: Mapping[str, Any] = MappingProxyType(_default_options)
_rng: np.random.Generator = np.random.default_rng(0)


def reset_options() -> None:
    """
        Resets random generation options to their default values, and re-seeds the generator with ``0``.
    """
    global _options
    global _rng
    _options = _default_options
    _rng = np.random.default_rng(0)


def default_options() -> Mapping[str, Any]:
    """
        Readonly view of the default random generation options.
    """
    return _default_options


def get_options() -> Mapping[str, Any]:
    """
        Readonly view of the current random generation options.
    """
    return _options


@contextmanager
def options(*,
            seed: Optional[int] = None,
            min_points: Optional[int] = None,
            max_points: Optional[int] = None,
            min_dim: Optional[int] = None,
            max_dim: Optional[int] = None,) -> Iterator[None]:
    """
        Returns with-statement context manager for temporary option setting:

        .. code-block:: python

            with options(**options):
                for data in rand_dataset(num_samples, mode="zone"):
                    ...

        See :func:`set_options` for a description of the options.
    """
    for arg in (seed, min_points, max_points, min_dim, max_dim):
        validate(arg, Optional[int])
    global _options
    global _rng
    _old_options = _options
    _old_rng = _rng
    try:
        set_options(seed=seed,
                    min_points=min_points, max_points=max_points,
                    min_dim=min_dim, max_dim=max_dim,)
        yield
    finally:
        _options = _old_options
        _rng = _old_rng


def set_options(*,
                seed: Optional[int] = None,
                min_points: Optional[int] = None,
                max_points: Optional[int] = None,
                min_dim: Optional[int] = None,
                max_dim: Optional[int] = None,) -> None:
    """
        Permanently sets random generation options:

        .. code-block:: python

            seed: int           # set new random number generator, with this seed
            min_points: int     # min number of individuals in a dataset
            max_points: int     # max number of individuals in a dataset
            min_dim: int        # min number of coordinates, for zone-based data
            max_dim: int        # max number of coordinates, for zone-based data

    """
    # pylint: disable = too-many-branches
    for arg in (seed, min_points, max_points, min_dim, max_dim):
        validate(arg, Optional[int])
    global _options
    global _rng
    # set newly passed options
    _new_options: Dict[str, Any] = {}
    if seed is not None:
        _rng = np.random.default_rng(seed)
    if min_points is not None:
        if min_points < 2:
            raise ValueError("Value for min_points is smaller than 2.")
        _new_options["min_points"] = min_points
    if max_points is not None:
        if max_points < 2:
            raise ValueError("Value for max_points is smaller than 2.")
        _new_options["max_points"] = max_points
    if min_dim is not None:
        if min_dim < 1:
            raise ValueError("Value for min_dim is not positive.")
        _new_options["min_dim"] = min_dim
    if max_dim is not None:
        if max_dim < 1:
            raise ValueError("Value for max_dim is not positive.")
        _new_options["max_dim"] = max_dim
    # pass-through other options with former values
    for k, v in _options.items():
        if k not in _new_options:
            _new_options[k] = v
    # check compatibility conditions
    if _new_options["min_points"] > _new_options["max_points"]:
        raise ValueError("Value for min_points is larger than value for max_points.")
    if _new_options["min_dim"] > _new_options["max_dim"]:
        raise ValueError("Value for min_dim is larger than value for max_dim.")
    # update options
    _options = MappingProxyType(_new_options)


def _sample_size(size: Optional[int]) -> int:
    if size is not None:
        return size
    return int(_rng.integers(_options["min_points"], _options["max_points"], endpoint=True))

def _sample_dim(dim: Optional[int]) -> int:
    if dim is not None:
        return dim
    return int(_rng.integers(_options["min_dim"], _options["max_dim"], endpoint=True))

def _check_count(n: Optional[int]) -> None:
    validate(n, Optional[int])
    if n is not None and n < 0:
        raise ValueError("Number of samples is negative.")

def rand_points(n: Optional[int] = None, *, size: Optional[int] = None, dim: Optional[int] = None) -> Iterator[FloatArray]:
    """
        Generates a stream of normalized coordinate arrays, uniform in ``[-1, 1]**k``, of shape ``(m, k)``.
        If a number ``n`` is given, that number of samples is yielded.
        The number of points ``m`` and dimension ``k`` are sampled from the options unless given.

        :param n: the number of samples
        :type n: :obj:`int` or :obj:`None`, *optional*
        :param size: the number of points ``m``
        :type size: :obj:`int` or :obj:`None`, *optional*
        :param dim: the dimension ``k``
        :type dim: :obj:`int` or :obj:`None`, *optional*
    """
    _check_count(n)
    validate(size, Optional[int])
    validate(dim, Optional[int])
    rng = _rng
    yielded = 0
    while n is None or yielded < n:
        m = _sample_size(size)
        k = _sample_dim(dim)
        yield rng.uniform(-1.0, 1.0, size=(m, k))
        yielded += 1

def rand_dtr(n: Optional[int] = None, *, size: Optional[int] = None, p: Real = 2) -> Iterator[DtRVector]:
    """
        Generates a stream of DtR vectors, computed from points uniform in the unit square
        against a reference point at the origin.

        Example usage:

        >>> from spatialfair import random
        >>> dtr = next(random.rand_dtr(size=5))
        >>> float(dtr.distances.max())
        1.0

        :param n: the number of samples
        :type n: :obj:`int` or :obj:`None`, *optional*
        :param size: the number of points ``m``
        :type size: :obj:`int` or :obj:`None`, *optional*
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`, *optional*
    """
    _check_count(n)
    validate(size, Optional[int])
    validate(p, Real)
    rng = _rng
    yielded = 0
    while n is None or yielded < n:
        m = _sample_size(size)
        points = rng.uniform(0.0, 1.0, size=(m, 2))
        yield compute_dtr(points, [0.0, 0.0], p)
        yielded += 1

def rand_scores(n: Optional[int] = None, *, size: Optional[int] = None) -> Iterator[FloatArray]:
    """
        Generates a stream of score vectors, uniform in ``[0, 1]``.

        :param n: the number of samples
        :type n: :obj:`int` or :obj:`None`, *optional*
        :param size: the number of scores ``m``
        :type size: :obj:`int` or :obj:`None`, *optional*
    """
    _check_count(n)
    validate(size, Optional[int])
    rng = _rng
    yielded = 0
    while n is None or yielded < n:
        yield rng.uniform(0.0, 1.0, size=_sample_size(size))
        yielded += 1

def smooth_scores(inputs: npt.ArrayLike, *, noise: Real = 0.0) -> FloatArray:
    """
        Likelihood scores which vary smoothly with the inputs, as a trained classifier's would:
        a random combination of cosine waves (one per dimension), plus optional Gaussian noise,
        clipped into ``[0, 1]``.

        :param inputs: DtR values or coordinates
        :type inputs: array-like
        :param noise: standard deviation of the Gaussian noise
        :type noise: :obj:`int` or :obj:`float`, *optional*
    """
    validate(noise, Real)
    if not noise >= 0:
        raise ConfigError(f"Noise level must be non-negative, found {noise}.")
    pts = as_points(inputs)
    m, k = pts.shape
    rng = _rng
    freqs = rng.uniform(1.0, 4.0, size=k)
    phases = rng.uniform(0.0, 2*math.pi, size=k)
    waves = np.cos(pts*freqs+phases)
    scores = 0.5+0.4*np.mean(waves, axis=1)
    if noise > 0:
        scores = scores+rng.normal(0.0, float(noise), size=m)
    return np.clip(scores, 0.0, 1.0)

def rand_dataset(n: Optional[int] = None, *, mode: str = "distance", size: Optional[int] = None,
                 dim: Optional[int] = None, p: Real = 2, noise: Real = 0.1) -> Iterator[ScoredDataset]:
    """
        Generates a stream of scored datasets, with smooth noisy scores (see :func:`smooth_scores`).
        Distance-based datasets have DtR inputs from :func:`rand_dtr`, zone-based datasets have
        normalized coordinates from :func:`rand_points`.

        :param n: the number of samples
        :type n: :obj:`int` or :obj:`None`, *optional*
        :param mode: the fairness mode
        :type mode: ``"distance"`` or ``"zone"``, *optional*
        :param size: the number of individuals ``m``
        :type size: :obj:`int` or :obj:`None`, *optional*
        :param dim: the dimension ``k`` (zone-based mode only)
        :type dim: :obj:`int` or :obj:`None`, *optional*
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`, *optional*
        :param noise: standard deviation of the score noise
        :type noise: :obj:`int` or :obj:`float`, *optional*
    """
    # pylint: disable = too-many-arguments
    _check_count(n)
    validate(size, Optional[int])
    validate(dim, Optional[int])
    mode = validate_mode(mode)
    yielded = 0
    while n is None or yielded < n:
        if mode == "distance":
            dtr = next(rand_dtr(size=size, p=p))
            yield ScoredDataset(dtr, smooth_scores(dtr.distances, noise=noise))
        else:
            points = next(rand_points(size=size, dim=dim))
            yield ScoredDataset(points, smooth_scores(points, noise=noise), mode="zone", p=p)
        yielded += 1

def rand_coefficients(n: Optional[int] = None, *, bounds: CoefficientBounds,
                      intercept_range: Real = 1.0) -> Iterator[FloatArray]:
    """
        Generates a stream of coefficient vectors uniform within the given bounds.
        The (unbounded) intercept is drawn uniformly from ``[-intercept_range, intercept_range]``.

        :param n: the number of samples
        :type n: :obj:`int` or :obj:`None`, *optional*
        :param bounds: the coefficient bounds
        :type bounds: :class:`~spatialfair.bounds.variants.CoefficientBounds`
        :param intercept_range: the intercept range
        :type intercept_range: :obj:`int` or :obj:`float`, *optional*
    """
    _check_count(n)
    validate(bounds, CoefficientBounds)
    validate(intercept_range, Real)
    rng = _rng
    mags = bounds.magnitudes
    yielded = 0
    while n is None or yielded < n:
        intercept = rng.uniform(-intercept_range, intercept_range)
        yield np.concatenate(([intercept], rng.uniform(-mags, mags)))
        yielded += 1
