"""
    Distances between spatial points, coordinate normalization and distance-to-reference (DtR) construction.

    Points are handled as :mod:`numpy` arrays: a single point is a 1-dimensional array of ``k`` coordinates,
    a collection of ``m`` points is a 2-dimensional array of shape ``(m, k)``.
    A 1-dimensional array passed where a collection is expected is read as ``m`` points in dimension ``k = 1``.

    >>> from spatialfair.geometry import minkowski_distance, compute_dtr
    >>> minkowski_distance([1, 1], [0, 0], 2)
    1.4142135623730951
    >>> compute_dtr([[0, 1], [0, 2], [0, 4]], [0, 0], 2).distances
    array([0.25, 0.5 , 1.  ])

"""

from __future__ import annotations

import math
import warnings
from typing import Any, Dict, Mapping, Optional, Tuple, Union
import numpy as np
import numpy.typing as npt
from scipy.spatial.distance import cdist
from typing_validation import validate

from .errors import (DegenerateReferenceError, DimensionMismatchError, EmptyInputError, InputError,
                     InvalidNormOrderError, NonFiniteInputError, DegenerateDimensionWarning, ClippedInputWarning)

FloatArray = npt.NDArray[np.float64]
""" Type alias for arrays of double precision floats. """

Real = Union[int, float]
""" Type alias for real scalars accepted by public functions. """

def validate_norm_order(p: Real) -> float:
    """
        Validates a norm order and returns it as a float (``math.inf`` is allowed).

        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`

        :raises InvalidNormOrderError: if ``p < 1`` or ``p`` is NaN
    """
    validate(p, Real)
    if not p >= 1:
        raise InvalidNormOrderError(p)
    return float(p)

def as_point(point: npt.ArrayLike, what: str = "point") -> FloatArray:
    """
        Converts a single point to a 1-dimensional float array, checking that all coordinates are finite.

        :param point: the point coordinates
        :type point: array-like
    """
    arr = np.array(point, dtype=np.float64, ndmin=1)
    if arr.ndim != 1:
        raise InputError(f"Expected a single point for {what}, found array of shape {arr.shape}.")
    if arr.size == 0:
        raise EmptyInputError(what)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(what)
    return arr

def as_points(points: npt.ArrayLike, what: str = "points") -> FloatArray:
    """
        Converts a collection of points to a float array of shape ``(m, k)``,
        checking that it is non-empty and that all coordinates are finite.

        :param points: the point coordinates
        :type points: array-like
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InputError(f"Expected an array of points for {what}, found array of shape {arr.shape}.")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise EmptyInputError(what)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(what)
    return arr

def minkowski_distance(a: npt.ArrayLike, b: npt.ArrayLike, p: Real) -> float:
    """
        Minkowski distance of order ``p`` between two points:

        .. code-block:: python

            (sum(abs(x-y)**p for x, y in zip(a, b)))**(1/p)

        Passing ``p = math.inf`` yields the Chebyshev distance.

        >>> minkowski_distance([3, 0], [0, 4], 1)
        7.0

        :param a: the first point
        :type a: array-like
        :param b: the second point
        :type b: array-like
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`

        :raises DimensionMismatchError: if the points have different dimensions
        :raises InvalidNormOrderError: if ``p < 1``
    """
    p = validate_norm_order(p)
    a_arr = as_point(a, "a")
    b_arr = as_point(b, "b")
    if a_arr.shape != b_arr.shape:
        raise DimensionMismatchError(a_arr.size, b_arr.size)
    return float(np.linalg.norm(a_arr-b_arr, ord=p))

def cross_distances(a: FloatArray, b: FloatArray, p: float) -> FloatArray:
    """
        Matrix of Minkowski distances between the rows of ``a`` (shape ``(r, k)``) and the rows of ``b``
        (shape ``(s, k)``). No validation is performed: this is the inner kernel used by audits.
    """
    if a.shape[1] == 1:
        return np.abs(a[:, 0][:, None]-b[:, 0][None, :])
    if math.isinf(p):
        return cdist(a, b, metric="chebyshev")
    return cdist(a, b, metric="minkowski", p=p)

class DistanceTransform:
    """
        Maps raw coordinates to normalized distances-to-reference, using a fixed reference point,
        norm order and normalizer ``gamma``. Used to apply a fitted distance-based model to fresh query points.

        :param reference: the reference point
        :type reference: array-like
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`
        :param gamma: the (strictly positive) distance normalizer
        :type gamma: :obj:`float`
    """

    _reference: FloatArray
    _p: float
    _gamma: float

    def __init__(self, reference: npt.ArrayLike, p: Real, gamma: Real):
        validate(gamma, Real)
        self._p = validate_norm_order(p)
        self._reference = as_point(reference, "reference")
        self._reference.flags.writeable = False
        if not gamma > 0 or not math.isfinite(gamma):
            raise DegenerateReferenceError()
        self._gamma = float(gamma)

    @property
    def reference(self) -> FloatArray:
        """ The reference point. """
        return self._reference

    @property
    def p(self) -> float:
        """ The norm order. """
        return self._p

    @property
    def gamma(self) -> float:
        """ The distance normalizer. """
        return self._gamma

    def apply(self, points: npt.ArrayLike) -> Tuple[FloatArray, int]:
        """
            Returns the normalized distances of the given raw points to the reference,
            clipped at 1, together with the number of points which had to be clipped.

            :param points: raw point coordinates
            :type points: array-like
        """
        pts = as_points(points)
        if pts.shape[1] != self._reference.size:
            raise DimensionMismatchError(pts.shape[1], self._reference.size)
        raw = cross_distances(pts, self._reference[None, :], self._p)[:, 0]
        dtr = raw/self._gamma
        return clip_with_count(dtr, 0.0, 1.0)

    def to_dict(self) -> Dict[str, Any]:
        """ Plain-data representation, used by model files. """
        return {"kind": "distance", "reference": [float(x) for x in self._reference],
                "p": _encode_float(self._p), "gamma": self._gamma}

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, DistanceTransform):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((tuple(self._reference), self._p, self._gamma))

    def __repr__(self) -> str:
        return f"DistanceTransform({list(self._reference)}, p={self._p}, gamma={self._gamma})"

class AffineTransform:
    """
        Per-dimension affine map of raw coordinates onto ``[-1, 1]``.
        Dimensions with a constant training range (``low == high``) are degenerate and map to ``0``.

        :param lows: per-dimension minimum of the training coordinates
        :type lows: array-like
        :param highs: per-dimension maximum of the training coordinates
        :type highs: array-like
    """

    _lows: FloatArray
    _highs: FloatArray
    _degenerate: npt.NDArray[np.bool_]

    def __init__(self, lows: npt.ArrayLike, highs: npt.ArrayLike):
        self._lows = as_point(lows, "lows")
        self._highs = as_point(highs, "highs")
        if self._lows.shape != self._highs.shape:
            raise DimensionMismatchError(self._lows.size, self._highs.size)
        if np.any(self._lows > self._highs):
            raise InputError("Affine transform lows must not exceed highs.")
        self._degenerate = self._lows == self._highs
        for arr in (self._lows, self._highs, self._degenerate):
            arr.flags.writeable = False

    @property
    def dimension(self) -> int:
        """ Number of coordinate dimensions. """
        return int(self._lows.size)

    @property
    def lows(self) -> FloatArray:
        """ Per-dimension values mapped to ``-1``. """
        return self._lows

    @property
    def highs(self) -> FloatArray:
        """ Per-dimension values mapped to ``+1``. """
        return self._highs

    @property
    def degenerate(self) -> Tuple[int, ...]:
        """ Indices of the degenerate (constant) dimensions. """
        return tuple(int(i) for i in np.flatnonzero(self._degenerate))

    def apply(self, points: npt.ArrayLike) -> FloatArray:
        """
            Applies the affine map, without clipping: points outside the training box map outside ``[-1, 1]``.

            >>> t = AffineTransform([0], [10])
            >>> t.apply([0, 5, 10])
            array([[-1.],
                   [ 0.],
                   [ 1.]])

            :param points: raw point coordinates
            :type points: array-like
        """
        pts = as_points(points)
        if pts.shape[1] != self.dimension:
            raise DimensionMismatchError(pts.shape[1], self.dimension)
        span = np.where(self._degenerate, 1.0, self._highs-self._lows)
        out = 2.0*((pts-self._lows)/span)-1.0
        out[:, self._degenerate] = 0.0
        return out

    def apply_clipped(self, points: npt.ArrayLike) -> Tuple[FloatArray, int]:
        """
            Applies the affine map and clips the result into ``[-1, 1]``,
            returning the number of points (rows) which had at least one coordinate clipped.

            :param points: raw point coordinates
            :type points: array-like
        """
        return clip_with_count(self.apply(points), -1.0, 1.0)

    def inverse(self, points: npt.ArrayLike) -> FloatArray:
        """
            Inverse of :meth:`apply` on non-degenerate dimensions;
            degenerate dimensions map back to their constant training value.

            :param points: normalized point coordinates
            :type points: array-like
        """
        pts = as_points(points)
        if pts.shape[1] != self.dimension:
            raise DimensionMismatchError(pts.shape[1], self.dimension)
        out = (pts+1.0)/2.0*(self._highs-self._lows)+self._lows
        out[:, self._degenerate] = self._lows[self._degenerate]
        return out

    def to_dict(self) -> Dict[str, Any]:
        """ Plain-data representation, used by model files. """
        return {"kind": "affine", "lows": [float(x) for x in self._lows],
                "highs": [float(x) for x in self._highs]}

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, AffineTransform):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((tuple(self._lows), tuple(self._highs)))

    def __repr__(self) -> str:
        return f"AffineTransform({list(self._lows)}, {list(self._highs)})"

Transform = Union[DistanceTransform, AffineTransform]
""" Type alias for normalization transforms stored alongside fitted models. """

def transform_from_dict(data: Mapping[str, Any]) -> Transform:
    """
        Reconstructs a transform from the plain-data representation produced by ``to_dict``.

        :param data: the plain-data representation
        :type data: :obj:`~typing.Mapping`\\ [:obj:`str`, :obj:`~typing.Any`]

        :raises ValueError: if the transform kind is unknown
    """
    kind = data.get("kind")
    if kind == "affine":
        return AffineTransform(data["lows"], data["highs"])
    if kind == "distance":
        return DistanceTransform(data["reference"], _decode_float(data["p"]), data["gamma"])
    raise ValueError(f"Unknown transform kind {repr(kind)}.")

class DtRVector:
    """
        Normalized distances-to-reference ``l_i = ||l_i - R||_p / gamma``, all in ``[0, 1]``.

        :param distances: the normalized distances
        :type distances: array-like
        :param gamma: the normalizer (maximum raw distance to the reference)
        :type gamma: :obj:`float`
        :param p: the norm order used for the raw distances
        :type p: :obj:`int` or :obj:`float`
        :param reference: optional reference point, when known
        :type reference: array-like or :obj:`None`, *optional*

        :raises InputError: if some distance lies outside ``[0, 1]``
        :raises DegenerateReferenceError: if ``gamma`` is not strictly positive
    """

    _distances: FloatArray
    _gamma: float
    _p: float
    _reference: Optional[FloatArray]

    def __init__(self, distances: npt.ArrayLike, gamma: Real, p: Real = 2, *,
                 reference: Optional[npt.ArrayLike] = None):
        validate(gamma, Real)
        self._p = validate_norm_order(p)
        arr = np.array(distances, dtype=np.float64).ravel()
        if arr.size == 0:
            raise EmptyInputError("distances")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInputError("distances")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise InputError("Normalized distances must lie in [0, 1].")
        if not gamma > 0 or not math.isfinite(gamma):
            raise DegenerateReferenceError()
        arr.flags.writeable = False
        self._distances = arr
        self._gamma = float(gamma)
        self._reference = None if reference is None else as_point(reference, "reference")

    @property
    def distances(self) -> FloatArray:
        """ The normalized distances, as a read-only array. """
        return self._distances

    @property
    def gamma(self) -> float:
        """ The normalizer. """
        return self._gamma

    @property
    def p(self) -> float:
        """ The norm order. """
        return self._p

    @property
    def reference(self) -> Optional[FloatArray]:
        """ The reference point, if known. """
        return self._reference

    @property
    def transform(self) -> Optional[DistanceTransform]:
        """
            The transform mapping fresh raw points to distances normalized consistently with this vector,
            or :obj:`None` if the reference point is not known.
        """
        if self._reference is None:
            return None
        return DistanceTransform(self._reference, self._p, self._gamma)

    def __len__(self) -> int:
        return int(self._distances.size)

    def __repr__(self) -> str:
        return f"DtRVector(<{len(self)} distances>, gamma={self._gamma}, p={self._p})"

def compute_dtr(points: npt.ArrayLike, reference: npt.ArrayLike, p: Real = 2) -> DtRVector:
    """
        Computes normalized distances-to-reference: each raw ``p``-norm distance to the reference
        is divided by the maximum such distance ``gamma``, so that the farthest point has DtR exactly ``1``.

        >>> dtr = compute_dtr([[1, 1], [3, 1]], [0, 0], 2)
        >>> dtr.gamma
        3.1622776601683795
        >>> dtr.distances[0]
        0.4472135954999579

        :param points: raw point coordinates, shape ``(m, k)``
        :type points: array-like
        :param reference: the reference point, ``k`` coordinates
        :type reference: array-like
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`

        :raises DegenerateReferenceError: if all points coincide with the reference
        :raises DimensionMismatchError: if the reference dimension differs from the points dimension
    """
    p = validate_norm_order(p)
    pts = as_points(points)
    ref = as_point(reference, "reference")
    if pts.shape[1] != ref.size:
        raise DimensionMismatchError(pts.shape[1], ref.size)
    raw = cross_distances(pts, ref[None, :], p)[:, 0]
    gamma = float(np.max(raw))
    if gamma <= 0.0:
        raise DegenerateReferenceError()
    distances = raw/gamma
    distances[raw == gamma] = 1.0
    return DtRVector(distances, gamma, p, reference=ref)

def normalize_coords(points: npt.ArrayLike) -> Tuple[FloatArray, AffineTransform]:
    """
        Maps each coordinate dimension affinely onto ``[-1, 1]`` (training minimum to ``-1``, maximum to ``+1``),
        returning the normalized points and the transform, for reuse on future query points.
        Constant dimensions map to ``0``, with a :class:`~spatialfair.errors.DegenerateDimensionWarning`.

        >>> normalized, t = normalize_coords([[0, 7], [5, 7], [10, 7]])
        >>> normalized
        array([[-1.,  0.],
               [ 0.,  0.],
               [ 1.,  0.]])
        >>> t.degenerate
        (1,)

        :param points: raw point coordinates
        :type points: array-like

        :raises EmptyInputError: if there are no points
    """
    pts = as_points(points)
    transform = AffineTransform(np.min(pts, axis=0), np.max(pts, axis=0))
    if transform.degenerate:
        warnings.warn(f"Constant coordinate dimension(s) {list(transform.degenerate)} normalized to 0.",
                      DegenerateDimensionWarning, stacklevel=2)
    return transform.apply(pts), transform

def clip_with_count(values: FloatArray, low: float, high: float) -> Tuple[FloatArray, int]:
    """
        Clips values into ``[low, high]``, returning the number of values (rows, for 2-dimensional arrays) which were
        clipped. Issues a :class:`~spatialfair.errors.ClippedInputWarning` if that number is positive.
    """
    outside = (values < low) | (values > high)
    if outside.ndim == 2:
        num_clipped = int(np.count_nonzero(np.any(outside, axis=1)))
    else:
        num_clipped = int(np.count_nonzero(outside))
    if num_clipped > 0:
        warnings.warn(f"{num_clipped} query point(s) fell outside the normalization box and were clipped.",
                      ClippedInputWarning, stacklevel=3)
    return np.clip(values, low, high), num_clipped

def _encode_float(x: float) -> Union[float, str]:
    return "inf" if math.isinf(x) else x

def _decode_float(x: Union[float, int, str]) -> float:
    return math.inf if x == "inf" else float(x)

def encode_norm_order(p: float) -> Union[float, str]:
    """ Norm order in a JSON-safe form (``math.inf`` becomes the string ``"inf"``). """
    return _encode_float(p)

def decode_norm_order(p: Union[float, int, str]) -> float:
    """ Inverse of :func:`encode_norm_order`. """
    return _decode_float(p)
