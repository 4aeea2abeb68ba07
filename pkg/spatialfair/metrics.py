"""
    Fairness and utility measurement: statistical distance, pairwise Lipschitz audits,
    fitting error and score clamping.

    A pair of individuals ``(i, j)`` satisfies individual spatial fairness at level ``c`` when:

    .. code-block:: python

        abs(scores[i]-scores[j]) <= c*d(i, j)

    where ``d`` is ``abs(l[i]-l[j])`` for distance-based datasets (DtR values) and the ``p``-norm distance
    between coordinates for zone-based datasets.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union
import numpy as np
import numpy.typing as npt
from typing_extensions import Final, Literal
from typing_validation import validate

from .errors import ConfigError, DimensionMismatchError, EmptyInputError, InputError, NonFiniteInputError, ScoreRangeError
from .geometry import DtRVector, FloatArray, Real, as_points, cross_distances, validate_norm_order

_log = logging.getLogger(__name__)

Mode = Literal["distance", "zone"]
""" Fairness mode: ``"distance"`` for DtR-based fairness, ``"zone"`` for coordinate-based fairness. """

modes: Final = ("distance", "zone")
""" Tuple of valid modes (for use in validation). """

AUDIT_EPSILON: Final = 1e-9
""" Absolute slack granted to each pairwise constraint, absorbing floating-point roundoff. """

_BLOCK_ELEMENTS: Final = 1 << 21

def validate_mode(mode: str) -> Mode:
    """
        Validates a fairness mode.

        :param mode: the mode
        :type mode: :obj:`str`

        :raises ConfigError: if the mode is not one of ``"distance"`` or ``"zone"``
    """
    validate(mode, str)
    if mode == "distance":
        return "distance"
    if mode == "zone":
        return "zone"
    raise ConfigError(f"Mode {repr(mode)} not supported, expected one of {modes}.")

def validate_c(c: Real) -> float:
    """
        Validates a fairness constant ``c >= 1``.

        :param c: the fairness constant
        :type c: :obj:`int` or :obj:`float`

        :raises ConfigError: if ``c < 1`` or ``c`` is not finite
    """
    validate(c, Real)
    if not c >= 1 or math.isinf(c):
        raise ConfigError(f"Fairness constant c must be a finite real >= 1, found {c}.")
    return float(c)

def as_scores(scores: npt.ArrayLike, what: str = "scores", *, check_range: bool = True) -> FloatArray:
    """
        Converts scores to a 1-dimensional float array, checking that they are finite and,
        optionally, that they lie in ``[0, 1]``.

        :param scores: the scores
        :type scores: array-like
        :param check_range: whether to check that scores lie in ``[0, 1]``
        :type check_range: :obj:`bool`, *optional*

        :raises ScoreRangeError: if ``check_range`` is set and a score lies outside ``[0, 1]``
    """
    validate(check_range, bool)
    arr = np.asarray(scores, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(what)
    if check_range:
        bad = np.flatnonzero((arr < 0.0) | (arr > 1.0))
        if bad.size > 0:
            idx = int(bad[0])
            raise ScoreRangeError(idx, float(arr[idx]))
    return arr

class ScoredDataset:
    """
        Spatial inputs paired with likelihood scores in ``[0, 1]``.

        In distance-based mode the inputs are normalized distances-to-reference (a :class:`~spatialfair.geometry.DtRVector`
        or a 1-dimensional array of values in ``[0, 1]``) and the audit distance is ``abs(l[i]-l[j])``.
        In zone-based mode the inputs are point coordinates of shape ``(m, k)`` and the audit distance is
        the ``p``-norm distance.

        >>> data = ScoredDataset([0.0, 0.5, 1.0], [0.0, 0.3, 0.9], mode="distance")
        >>> data.audit_original(1)
        AuditReport(total_pairs=3, violated_pairs=1, unfairness_pct=33.33..., ...)

        :param inputs: DtR values or point coordinates
        :type inputs: :class:`~spatialfair.geometry.DtRVector` or array-like
        :param scores: likelihood scores, aligned with the inputs
        :type scores: array-like
        :param mode: the fairness mode
        :type mode: ``"distance"`` or ``"zone"``, *optional*
        :param p: the norm order (zone-based audit distance; DtR norm order in distance-based mode)
        :type p: :obj:`int` or :obj:`float`, *optional*

        :raises InputError: if fewer than two individuals are given, or inputs and scores are not aligned
        :raises ScoreRangeError: if some score lies outside ``[0, 1]``
    """

    _inputs: FloatArray
    _scores: FloatArray
    _mode: Mode
    _p: float

    def __init__(self, inputs: Union[DtRVector, npt.ArrayLike], scores: npt.ArrayLike, *,
                 mode: str = "distance", p: Real = 2):
        self._mode = validate_mode(mode)
        self._p = validate_norm_order(p)
        if isinstance(inputs, DtRVector):
            if self._mode != "distance":
                raise ConfigError("DtR vectors can only be used in distance-based mode.")
            self._p = inputs.p
            inputs = inputs.distances
        arr = as_points(inputs, "inputs")
        if self._mode == "distance":
            if arr.shape[1] != 1:
                raise InputError(f"Distance-based inputs must be scalar DtR values, found dimension {arr.shape[1]}.")
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise InputError("DtR values must lie in [0, 1].")
        self._scores = as_scores(scores)
        if arr.shape[0] != self._scores.size:
            raise InputError(f"Found {arr.shape[0]} inputs but {self._scores.size} scores.")
        if arr.shape[0] < 2:
            raise InputError("At least two individuals are required.")
        arr = arr.copy()
        arr.flags.writeable = False
        self._scores = self._scores.copy()
        self._scores.flags.writeable = False
        self._inputs = arr

    @property
    def inputs(self) -> FloatArray:
        """ Inputs, as a read-only array of shape ``(m, k)`` (``k = 1`` in distance-based mode). """
        return self._inputs

    @property
    def scores(self) -> FloatArray:
        """ Scores, as a read-only array of shape ``(m,)``. """
        return self._scores

    @property
    def mode(self) -> Mode:
        """ The fairness mode. """
        return self._mode

    @property
    def p(self) -> float:
        """ The norm order. """
        return self._p

    @property
    def size(self) -> int:
        """ Number of individuals ``m``. """
        return int(self._scores.size)

    @property
    def dimension(self) -> int:
        """ Number of input dimensions ``k`` (always ``1`` in distance-based mode). """
        return int(self._inputs.shape[1])

    def audit_original(self, c: Real = 1, *, sample: Optional[int] = None, seed: int = 0,
                       workers: int = 1) -> AuditReport:
        """
            Audits the dataset's own scores, before any fairness mechanism is applied.
            See :func:`pairwise_audit` for a description of the arguments.
        """
        return pairwise_audit(self, self._scores, c, sample=sample, seed=seed, workers=workers)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"ScoredDataset(<{self.size} individuals>, mode={repr(self._mode)}, k={self.dimension}, p={self._p})"

@dataclass(frozen=True)
class AuditReport:
    """
        Pairwise Lipschitz constraint audit results.
    """

    total_pairs: int
    """ Number of pairs checked. """

    violated_pairs: int
    """ Number of pairs whose constraint is violated. """

    unfairness_pct: float
    """ Percentage of violated pairs, ``100*violated_pairs/total_pairs``. """

    max_violation: float
    """ Largest excess of statistical distance over ``c`` times the pair distance (``0`` if none). """

    c_used: float
    """ The fairness constant audited against. """

    sampled: bool = False
    """ Whether pairs were sampled rather than enumerated exhaustively. """

    @property
    def passed(self) -> bool:
        """ Whether no pair is violated. """
        return self.violated_pairs == 0

    def to_record(self, prefix: str = "") -> Dict[str, Any]:
        """
            Flat key-value record of the report, with keys optionally prefixed.

            :param prefix: prefix for all keys
            :type prefix: :obj:`str`, *optional*
        """
        validate(prefix, str)
        return {f"{prefix}total_pairs": self.total_pairs,
                f"{prefix}violated_pairs": self.violated_pairs,
                f"{prefix}unfairness_pct": self.unfairness_pct,
                f"{prefix}max_violation": self.max_violation,
                f"{prefix}c_used": self.c_used,
                f"{prefix}sampled": self.sampled}

def statistical_distance(score_i: Real, score_j: Real) -> float:
    """
        Statistical distance between the binary outcome distributions with positive-outcome likelihoods
        ``score_i`` and ``score_j``, which is simply ``abs(score_i-score_j)``.

        >>> statistical_distance(0.8, 0.3)
        0.5

        :param score_i: first likelihood score
        :type score_i: :obj:`int` or :obj:`float`
        :param score_j: second likelihood score
        :type score_j: :obj:`int` or :obj:`float`

        :raises ScoreRangeError: if a score lies outside ``[0, 1]``
    """
    validate(score_i, Real)
    validate(score_j, Real)
    for idx, score in enumerate((score_i, score_j)):
        if not 0 <= score <= 1:
            raise ScoreRangeError(idx, float(score))
    return float(abs(float(score_i)-float(score_j)))

def total_variation(dist_p: npt.ArrayLike, dist_q: npt.ArrayLike) -> float:
    """
        Statistical (total variation) distance between two discrete distributions over the same outcome space:

        .. code-block:: python

            0.5*sum(abs(p[a]-q[a]) for a in outcomes)

        For binary outcomes ``(1-s, s)`` this reduces to :func:`statistical_distance`.

        :param dist_p: probabilities of the first distribution
        :type dist_p: array-like
        :param dist_q: probabilities of the second distribution
        :type dist_q: array-like

        :raises InputError: if the arrays are not probability distributions of the same length
    """
    p_arr = np.asarray(dist_p, dtype=np.float64).ravel()
    q_arr = np.asarray(dist_q, dtype=np.float64).ravel()
    if p_arr.size == 0 or q_arr.size == 0:
        raise EmptyInputError("distributions")
    if p_arr.size != q_arr.size:
        raise DimensionMismatchError(p_arr.size, q_arr.size)
    for arr in (p_arr, q_arr):
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or abs(float(np.sum(arr))-1.0) > 1e-9:
            raise InputError("Distributions must be non-negative and sum to 1.")
    return 0.5*float(np.sum(np.abs(p_arr-q_arr)))

def pairwise_audit(data: ScoredDataset, scores_to_audit: npt.ArrayLike, c: Real = 1, *,
                   sample: Optional[int] = None, seed: int = 0, workers: int = 1) -> AuditReport:
    """
        Audits scores against the pairwise Lipschitz constraints of the dataset's geometry at level ``c``.
        A pair ``(i, j)`` is violated when:

        .. code-block:: python

            abs(scores[i]-scores[j]) > c*d(i, j) + AUDIT_EPSILON

        By default all ``m(m-1)/2`` pairs are enumerated. If ``sample`` is given, that number of pairs
        is drawn uniformly at random (with replacement) using the given ``seed``.

        The pair space is partitioned in row blocks: with ``workers > 1`` blocks are audited concurrently,
        and the result is identical to the sequential one.

        :param data: the dataset, supplying the geometry
        :type data: :class:`ScoredDataset`
        :param scores_to_audit: scores aligned with the dataset rows
        :type scores_to_audit: array-like
        :param c: the fairness constant
        :type c: :obj:`int` or :obj:`float`, *optional*
        :param sample: optional number of pairs to sample
        :type sample: :obj:`int` or :obj:`None`, *optional*
        :param seed: seed for pair sampling
        :type seed: :obj:`int`, *optional*
        :param workers: number of concurrent workers for exhaustive audits
        :type workers: :obj:`int`, *optional*

        :raises ConfigError: if ``c < 1``, ``sample < 1`` or ``workers < 1``
        :raises InputError: if the scores are not aligned with the dataset
    """
    validate(data, ScoredDataset)
    validate(sample, Optional[int])
    validate(seed, int)
    validate(workers, int)
    c = validate_c(c)
    scores = as_scores(scores_to_audit, "scores_to_audit", check_range=False)
    m = data.size
    if scores.size != m:
        raise InputError(f"Found {scores.size} scores to audit for {m} individuals.")
    if workers < 1:
        raise ConfigError(f"Number of workers must be positive, found {workers}.")
    if sample is not None:
        if sample < 1:
            raise ConfigError(f"Sample size must be positive, found {sample}.")
        violated, max_excess = _audit_sampled(data, scores, c, sample, seed)
        total = sample
    else:
        violated, max_excess = _audit_exhaustive(data, scores, c, workers)
        total = m*(m-1)//2
    _log.debug("Audited %d pairs at c=%g: %d violated.", total, c, violated)
    return AuditReport(total_pairs=total, violated_pairs=violated,
                       unfairness_pct=100.0*violated/total,
                       max_violation=max(0.0, max_excess), c_used=c, sampled=sample is not None)

def _audit_exhaustive(data: ScoredDataset, scores: FloatArray, c: float, workers: int) -> Tuple[int, float]:
    inputs = data.inputs
    p = data.p
    m = data.size
    block = max(1, min(m, _BLOCK_ELEMENTS//m))
    starts = list(range(0, m-1, block))

    def audit_block(start: int) -> Tuple[int, float]:
        stop = min(start+block, m-1)
        # rows i in [start, stop) against columns j in (start, m), keeping j > i only
        dist = cross_distances(inputs[start:stop], inputs[start+1:], p)
        excess = np.abs(scores[start:stop, None]-scores[None, start+1:])-c*dist
        row_idx = np.arange(stop-start)[:, None]
        col_idx = np.arange(m-start-1)[None, :]
        upper = col_idx >= row_idx
        excess = np.where(upper, excess, -np.inf)
        return int(np.count_nonzero(excess > AUDIT_EPSILON)), float(np.max(excess))

    if workers == 1 or len(starts) == 1:
        results = [audit_block(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(audit_block, starts))
    return sum(r[0] for r in results), max(r[1] for r in results)

def _audit_sampled(data: ScoredDataset, scores: FloatArray, c: float, sample: int, seed: int) -> Tuple[int, float]:
    inputs = data.inputs
    p = data.p
    m = data.size
    rng = np.random.default_rng(seed)
    i = rng.integers(0, m, size=sample)
    j = rng.integers(0, m-1, size=sample)
    j = j+(j >= i)
    diff = inputs[i]-inputs[j]
    if diff.shape[1] == 1:
        dist = np.abs(diff[:, 0])
    else:
        dist = np.linalg.norm(diff, ord=p, axis=1)
    excess = np.abs(scores[i]-scores[j])-c*dist
    return int(np.count_nonzero(excess > AUDIT_EPSILON)), float(np.max(excess))

def fitting_error(original: npt.ArrayLike, mapped: npt.ArrayLike) -> float:
    """
        Fitting error (utility loss) of a score mapping, the root-mean-square difference:

        .. code-block:: python

            sqrt(mean((original-mapped)**2))

        >>> round(fitting_error([0.8, 0.7, 0.3, 0.5], [0.5]*4), 3)
        0.206

        :param original: original scores
        :type original: array-like
        :param mapped: mapped scores, aligned with the original ones
        :type mapped: array-like

        :raises EmptyInputError: if the inputs are empty
        :raises DimensionMismatchError: if the inputs have different lengths
    """
    a = as_scores(original, "original", check_range=False)
    b = as_scores(mapped, "mapped", check_range=False)
    if a.size != b.size:
        raise DimensionMismatchError(a.size, b.size)
    if a.size == 0:
        raise EmptyInputError("scores")
    return float(np.sqrt(np.mean((a-b)**2)))

def clamp_scores(raw: npt.ArrayLike) -> FloatArray:
    """
        Suppresses values into ``[0, 1]``. Clamping is 1-Lipschitz, so it never increases
        the statistical distance between two scores.

        >>> clamp_scores([-0.2, 0.5, 1.3])
        array([0. , 0.5, 1. ])

        :param raw: raw values
        :type raw: array-like
    """
    return np.clip(np.asarray(raw, dtype=np.float64), 0.0, 1.0)
