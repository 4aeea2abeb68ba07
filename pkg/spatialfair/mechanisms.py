"""
    End-to-end fairness mechanisms: fitting c-fair polynomials to likelihood scores,
    selecting the polynomial degree, the threshold baseline and trade-off sweeps.

    A fit builds the design matrix for the dataset inputs, derives coefficient bounds which guarantee
    c-fairness, solves the bounded least squares problem against the original scores, and clamps the fitted
    values into ``[0, 1]``. Clamping is 1-Lipschitz, so the fair scores pass the audit at level ``c``.

    >>> from spatialfair.mechanisms import fit_distance_fair
    >>> report = fit_distance_fair([0.0, 0.25, 0.5, 1.0], [0.9, 0.1, 0.8, 0.2], 1, 2)
    >>> report.audit.violated_pairs
    0
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union
import warnings
import numpy as np
import numpy.typing as npt
from scipy import linalg
from typing_validation import validate

from .bounds import CoefficientBounds, FairnessConfig, derive_bounds
from .errors import ConfigError, DimensionMismatchError, Error, SkippedDegreeWarning
from .geometry import (AffineTransform, DistanceTransform, DtRVector, FloatArray, Real, Transform,
                       as_points, clip_with_count)
from .metrics import AuditReport, ScoredDataset, clamp_scores, fitting_error, pairwise_audit, validate_c
from .polynomial import FairPolynomial, build_design_matrix
from .solver import SolveDiagnostics, SolverConfig, bvls_solve

_log = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class FitReport:
    """
        Result of fitting a c-fair polynomial to a dataset.
    """

    polynomial: FairPolynomial
    """ The fitted polynomial. """

    config: FairnessConfig
    """ The fairness configuration used. """

    bounds: CoefficientBounds
    """ The coefficient bounds the polynomial was fitted under. """

    fair_scores: FloatArray
    """ The fitted values, clamped into ``[0, 1]``. """

    fitting_error: float
    """ Root-mean-square difference between original and fair scores. """

    diagnostics: SolveDiagnostics
    """ Solver diagnostics. """

    audit: AuditReport
    """ Audit of the fair scores at level ``c``. """

    audit_strict: AuditReport
    """ Audit of the fair scores at level ``1``. """

    transform: Optional[Transform] = None
    """ The normalization transform from raw inputs, if known. """

    @property
    def variant(self) -> str:
        """ Name of the bound variant used. """
        return self.bounds.variant

    @property
    def lipschitz_constant(self) -> float:
        """ Certified Lipschitz constant of the fitted polynomial, at most ``c`` up to roundoff. """
        return self.polynomial.lipschitz_constant(self.config.p)

    def to_record(self) -> Dict[str, Any]:
        """ Flat record of the scalar results, for tabular reports. """
        record: Dict[str, Any] = {"mode": self.config.mode, "k": self.config.dimension, "p": self.config.p,
                                  "n": self.config.degree, "c": self.config.c, "variant": self.variant}
        record.update(self.audit.to_record())
        record["unfairness_pct_c1"] = self.audit_strict.unfairness_pct
        record["fitting_error"] = self.fitting_error
        record["lipschitz_constant"] = self.lipschitz_constant
        degenerate = self.transform.degenerate if isinstance(self.transform, AffineTransform) else ()
        record["degenerate_dimensions"] = len(degenerate)
        record.update(self.diagnostics.to_record())
        return record

@dataclass(frozen=True)
class BaselineParams:
    """
        Parameters of the threshold baseline: each score is pushed towards a target by at most ``alpha``.
        In distance-based mode the target is the ``threshold`` itself.

        :raises ConfigError: if ``threshold`` is not in ``[0, 1]`` or ``alpha`` is negative
    """

    threshold: float = 0.5
    alpha: float = 0.0

    def __post_init__(self) -> None:
        validate(self.threshold, Real)
        validate(self.alpha, Real)
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"Threshold must lie in [0, 1], found {self.threshold}.")
        if not self.alpha >= 0.0 or math.isinf(self.alpha):
            raise ConfigError(f"Allowance alpha must be finite and non-negative, found {self.alpha}.")

@dataclass(frozen=True, eq=False)
class BaselineReport:
    """
        Result of the threshold baseline.
    """

    targets: FloatArray
    fair_scores: FloatArray
    audit: AuditReport
    fitting_error: float

@dataclass(frozen=True, eq=False)
class DegreeScore:
    """
        Degree selection outcome for a single degree. Skipped degrees have no criterion and no report.
    """

    degree: int
    criterion: Optional[float]
    report: Optional[FitReport]

    @property
    def skipped(self) -> bool:
        """ Whether the degree was skipped. """
        return self.report is None

@dataclass(frozen=True)
class SweepRow:
    """
        One cell of a trade-off sweep. If the cell failed, ``error`` holds the message and the metrics are NaN.
    """

    c: float
    n: int
    unfairness_pct: float
    unfairness_pct_c1: float
    original_unfairness_pct: float
    fitting_error: float
    solve_time: float
    iterations: int
    final_cost: float
    converged: bool
    variant: str = ""
    error: str = ""

    def to_record(self) -> Dict[str, Any]:
        """ Flat record, with keys in report column order. """
        return {"c": self.c, "n": self.n, "unfairness_pct": self.unfairness_pct,
                "unfairness_pct_c1": self.unfairness_pct_c1,
                "original_unfairness_pct": self.original_unfairness_pct,
                "fitting_error": self.fitting_error, "solve_time": self.solve_time,
                "iterations": self.iterations, "final_cost": self.final_cost,
                "converged": self.converged, "variant": self.variant, "error": self.error}

def fit_fair(data: ScoredDataset, config: FairnessConfig, solver: Optional[SolverConfig] = None, *,
             transform: Optional[Transform] = None, audit_sample: Optional[int] = None,
             seed: int = 0, workers: int = 1) -> FitReport:
    """
        Fits a c-fair polynomial to the scores of a dataset, with the structure dictated by the configuration mode.
        This is the common implementation of :func:`fit_distance_fair` and :func:`fit_zone_fair`.

        :param data: the dataset, with normalized inputs
        :type data: :class:`~spatialfair.metrics.ScoredDataset`
        :param config: the fairness configuration
        :type config: :class:`~spatialfair.bounds.config.FairnessConfig`
        :param solver: the solver configuration
        :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*
        :param transform: the normalization transform from raw inputs, recorded in the report
        :type transform: :class:`~spatialfair.geometry.DistanceTransform`, :class:`~spatialfair.geometry.AffineTransform`
                         or :obj:`None`, *optional*
        :param audit_sample: if not :obj:`None`, number of pairs sampled by the post-fit audits
        :type audit_sample: :obj:`int` or :obj:`None`, *optional*
        :param seed: seed for sampled audits
        :type seed: :obj:`int`, *optional*
        :param workers: number of concurrent workers for exhaustive audits
        :type workers: :obj:`int`, *optional*

        :raises ConfigError: if the dataset mode differs from the configuration mode
        :raises DimensionMismatchError: if the dataset dimension differs from the configuration dimension
    """
    # pylint: disable = too-many-arguments
    validate(data, ScoredDataset)
    validate(config, FairnessConfig)
    validate(solver, Optional[SolverConfig])
    if data.mode != config.mode:
        raise ConfigError(f"Dataset mode {repr(data.mode)} differs from configured mode {repr(config.mode)}.")
    if data.dimension != config.dimension:
        raise DimensionMismatchError(data.dimension, config.dimension)
    design = build_design_matrix(data.inputs, config.degree, config.structure)
    bounds = derive_bounds(config)
    coeffs, diagnostics = bvls_solve(design, data.scores, bounds, solver)
    polynomial = design.polynomial(coeffs)
    fair_scores = clamp_scores(design.predict(coeffs))
    fair_scores.flags.writeable = False
    audit = pairwise_audit(data, fair_scores, config.c, sample=audit_sample, seed=seed, workers=workers)
    if config.c == 1.0:
        audit_strict = audit
    else:
        audit_strict = pairwise_audit(data, fair_scores, 1, sample=audit_sample, seed=seed, workers=workers)
    error = fitting_error(data.scores, fair_scores)
    _log.info("Fitted %s polynomial (k=%d, n=%d, c=%g, variant %s): fitting error %.6g, unfairness %.4g%%",
              config.structure, config.dimension, config.degree, config.c, bounds.variant,
              error, audit.unfairness_pct)
    return FitReport(polynomial=polynomial, config=config, bounds=bounds, fair_scores=fair_scores,
                     fitting_error=error, diagnostics=diagnostics, audit=audit, audit_strict=audit_strict,
                     transform=transform)

def fit_distance_fair(dtr: Union[DtRVector, npt.ArrayLike], scores: npt.ArrayLike, c: Real, n: int,
                      solver: Optional[SolverConfig] = None, **kwargs: Any) -> FitReport:
    """
        Distance-based fairness: fits a univariate c-fair polynomial of degree ``n`` mapping DtR values to scores.
        The fair scores satisfy ``abs(M[i]-M[j]) <= c*abs(l[i]-l[j])`` for every pair.

        >>> report = fit_distance_fair([0.0, 0.5, 1.0], [0.0, 0.5, 1.0], 1, 1)
        >>> report.audit.passed, round(report.fitting_error, 9)
        (True, 0.0)

        :param dtr: normalized DtR values
        :type dtr: :class:`~spatialfair.geometry.DtRVector` or array-like
        :param scores: likelihood scores in ``[0, 1]``
        :type scores: array-like
        :param c: the fairness constant
        :type c: :obj:`int` or :obj:`float`
        :param n: the polynomial degree
        :type n: :obj:`int`
        :param solver: the solver configuration
        :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*
        :param kwargs: further keyword arguments for :func:`fit_fair`
        :type kwargs: :obj:`~typing.Dict`\\ [:obj:`str`, :obj:`~typing.Any`]
    """
    if isinstance(dtr, DtRVector):
        kwargs.setdefault("transform", dtr.transform)
    data = ScoredDataset(dtr, scores, mode="distance")
    return fit_fair(data, FairnessConfig(c, n, p=data.p), solver, **kwargs)

def fit_zone_fair(points: npt.ArrayLike, scores: npt.ArrayLike, config: FairnessConfig,
                  solver: Optional[SolverConfig] = None, **kwargs: Any) -> FitReport:
    """
        Zone-based fairness: fits a separable c-fair polynomial mapping normalized coordinates to scores.
        The fair scores satisfy ``abs(M[i]-M[j]) <= c*norm(x[i]-x[j], p)`` for every pair.

        :param points: normalized coordinates in ``[-1, 1]``, of shape ``(m, k)``
        :type points: array-like
        :param scores: likelihood scores in ``[0, 1]``
        :type scores: array-like
        :param config: the fairness configuration, in zone-based mode
        :type config: :class:`~spatialfair.bounds.config.FairnessConfig`
        :param solver: the solver configuration
        :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*
        :param kwargs: further keyword arguments for :func:`fit_fair`
        :type kwargs: :obj:`~typing.Dict`\\ [:obj:`str`, :obj:`~typing.Any`]

        :raises ConfigError: if the configuration is not zone-based
        :raises UnnormalizedInputError: if some coordinate lies outside ``[-1, 1]``
    """
    validate(config, FairnessConfig)
    if config.mode != "zone":
        raise ConfigError("Zone-based fits require a zone-based configuration.")
    data = ScoredDataset(points, scores, mode="zone", p=config.p)
    return fit_fair(data, config, solver, **kwargs)

def _is_better(value: float, best: float) -> bool:
    return value < best-max(1e-12, 1e-9*abs(best))

def select_degree(data: ScoredDataset, c: Real, degrees: Iterable[int],
                  solver: Optional[SolverConfig] = None, *,
                  audit_sample: Optional[int] = None, seed: int = 0) -> Tuple[int, Tuple[DegreeScore, ...]]:
    """
        Selects the polynomial degree minimizing the residual variance estimate

        .. code-block:: python

            sum((M-M_fair)**2)/(m-n-1)

        where ``M_fair`` are the clamped fair scores of the fit at degree ``n``. Criteria equal up to a relative
        ``1e-9`` (or an absolute ``1e-12``) are tied, and ties are broken in favour of the smaller degree.
        Degrees with ``m-n-1 <= 0`` are skipped with a :class:`~spatialfair.errors.SkippedDegreeWarning`.

        :param data: the dataset
        :type data: :class:`~spatialfair.metrics.ScoredDataset`
        :param c: the fairness constant
        :type c: :obj:`int` or :obj:`float`
        :param degrees: the candidate degrees
        :type degrees: :obj:`~typing.Iterable`\\ [:obj:`int`]
        :param solver: the solver configuration
        :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*

        :raises ConfigError: if no degree is given, or every degree is skipped
    """
    validate(data, ScoredDataset)
    validate(solver, Optional[SolverConfig])
    c = validate_c(c)
    candidates = sorted(set(degrees))
    for n in candidates:
        validate(n, int)
    if not candidates:
        raise ConfigError("At least one candidate degree is required.")
    m = data.size
    rows: List[DegreeScore] = []
    best: Optional[Tuple[int, float]] = None
    for n in candidates:
        dof = m-n-1
        if dof <= 0:
            warnings.warn(f"Degree {n} skipped: {m} individuals leave no residual degrees of freedom.",
                          SkippedDegreeWarning, stacklevel=2)
            rows.append(DegreeScore(n, None, None))
            continue
        config = FairnessConfig(c, n, dimension=data.dimension, p=data.p, mode=data.mode)
        report = fit_fair(data, config, solver, audit_sample=audit_sample, seed=seed)
        criterion = float(np.sum((data.scores-report.fair_scores)**2))/dof
        rows.append(DegreeScore(n, criterion, report))
        _log.info("Degree %d: criterion %.9g", n, criterion)
        if best is None or _is_better(criterion, best[1]):
            best = (n, criterion)
    if best is None:
        raise ConfigError(f"Every candidate degree was skipped for {m} individuals.")
    return best[0], tuple(rows)

def baseline_targets(data: ScoredDataset, params: BaselineParams) -> FloatArray:
    """
        Targets of the threshold baseline: the threshold itself in distance-based mode, and the clamped plane
        ``sum(x)/sqrt(k)`` on the normalized coordinates in zone-based mode.

        :param data: the dataset
        :type data: :class:`~spatialfair.metrics.ScoredDataset`
        :param params: the baseline parameters
        :type params: :class:`BaselineParams`
    """
    validate(data, ScoredDataset)
    validate(params, BaselineParams)
    if data.mode == "distance":
        return np.full(data.size, float(params.threshold))
    plane = np.sum(data.inputs, axis=1)/math.sqrt(data.dimension)
    return clamp_scores(plane)

def baseline_threshold(data: ScoredDataset, params: BaselineParams, c: Real = 1, *,
                       audit_sample: Optional[int] = None, seed: int = 0, workers: int = 1) -> BaselineReport:
    """
        Threshold baseline: pushes each score towards its target by at most ``alpha``, without overshooting:

        .. code-block:: python

            M_fair = M + sign(target-M)*min(alpha, abs(target-M))

        With ``alpha = 0`` the scores are returned unchanged.

        >>> data = ScoredDataset([0.1, 0.9], [0.9, 0.2])
        >>> baseline_threshold(data, BaselineParams(0.5, 0.1)).fair_scores
        array([0.8, 0.3])

        :param data: the dataset
        :type data: :class:`~spatialfair.metrics.ScoredDataset`
        :param params: the baseline parameters
        :type params: :class:`BaselineParams`
        :param c: the fairness constant for the audit
        :type c: :obj:`int` or :obj:`float`, *optional*
    """
    # pylint: disable = too-many-arguments
    c = validate_c(c)
    targets = baseline_targets(data, params)
    gap = targets-data.scores
    fair_scores = data.scores+np.sign(gap)*np.minimum(params.alpha, np.abs(gap))
    audit = pairwise_audit(data, fair_scores, c, sample=audit_sample, seed=seed, workers=workers)
    return BaselineReport(targets=targets, fair_scores=fair_scores, audit=audit,
                          fitting_error=fitting_error(data.scores, fair_scores))

def _sweep_cell(data: ScoredDataset, c: float, n: int, solver: Optional[SolverConfig],
                original: float, audit_sample: Optional[int], seed: int) -> SweepRow:
    # pylint: disable = too-many-arguments
    try:
        config = FairnessConfig(c, n, dimension=data.dimension, p=data.p, mode=data.mode)
        report = fit_fair(data, config, solver, audit_sample=audit_sample, seed=seed)
    except (Error, ValueError, linalg.LinAlgError) as e:
        _log.warning("Sweep cell c=%g, n=%d failed: %s", c, n, e)
        nan = math.nan
        return SweepRow(c, n, nan, nan, original, nan, nan, 0, nan, False, error=str(e))
    diagnostics = report.diagnostics
    return SweepRow(c, n, report.audit.unfairness_pct, report.audit_strict.unfairness_pct, original,
                    report.fitting_error, diagnostics.solve_time, diagnostics.iterations,
                    diagnostics.objective, diagnostics.converged, variant=report.variant)

def _original_unfairness(data: ScoredDataset, c: Real, audit_sample: Optional[int], seed: int) -> float:
    try:
        return data.audit_original(c, sample=audit_sample, seed=seed).unfairness_pct
    except ConfigError:
        return math.nan

def sweep_tradeoff(data: ScoredDataset, c_values: Sequence[Real], degrees: Sequence[int],
                   solver: Optional[SolverConfig] = None, *, workers: Optional[int] = None,
                   audit_sample: Optional[int] = None, seed: int = 0) -> List[SweepRow]:
    """
        Fits every ``(c, n)`` cell of a grid, recording unfairness (at ``c`` and at ``1``), fitting error
        and solver statistics. Cells run concurrently on independent inputs; rows are ordered by grid index
        (``c`` outer, ``n`` inner) regardless of completion order. A failing cell is recorded with its error
        message and does not stop the sweep. Each row also carries the unfairness of the original scores at ``c``.

        :param data: the dataset
        :type data: :class:`~spatialfair.metrics.ScoredDataset`
        :param c_values: the fairness constants
        :type c_values: :obj:`~typing.Sequence`\\ [:obj:`int` or :obj:`float`]
        :param degrees: the polynomial degrees
        :type degrees: :obj:`~typing.Sequence`\\ [:obj:`int`]
        :param solver: the solver configuration
        :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*
        :param workers: maximum number of concurrent cells (default: chosen by the executor)
        :type workers: :obj:`int` or :obj:`None`, *optional*

        :raises ConfigError: if a grid is empty
    """
    # pylint: disable = too-many-arguments
    validate(data, ScoredDataset)
    validate(c_values, Sequence[Real])
    validate(degrees, Sequence[int])
    validate(solver, Optional[SolverConfig])
    validate(workers, Optional[int])
    if not c_values or not degrees:
        raise ConfigError("Sweep grids must be non-empty.")
    original = {float(c): _original_unfairness(data, c, audit_sample, seed) for c in c_values}
    cells = [(float(c), n) for c in c_values for n in degrees]
    _log.info("Sweeping %d cells (%d values of c, %d degrees)", len(cells), len(c_values), len(degrees))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_sweep_cell, data, c, n, solver, original[c], audit_sample, seed)
                   for c, n in cells]
        return [future.result() for future in futures]

def predict_scores(polynomial: FairPolynomial, inputs: npt.ArrayLike,
                   transform: Optional[Transform] = None) -> Tuple[FloatArray, int]:
    """
        Applies a fitted polynomial to fresh query inputs, returning fair scores in ``[0, 1]``
        and the number of query points which fell outside the normalized domain.

        Raw inputs are first mapped through the stored transform. Points outside the domain
        (DtR above ``1``, or coordinates outside the training box) are clipped into it,
        with a :class:`~spatialfair.errors.ClippedInputWarning`, so that the fairness guarantee extends to them.
        Without a transform, inputs must already be normalized, and are clipped in the same way.

        :param polynomial: the fitted polynomial
        :type polynomial: :class:`~spatialfair.polynomial.abstract.FairPolynomial`
        :param inputs: raw query inputs (normalized, if no transform is given)
        :type inputs: array-like
        :param transform: the normalization transform
        :type transform: :class:`~spatialfair.geometry.DistanceTransform`, :class:`~spatialfair.geometry.AffineTransform`
                         or :obj:`None`, *optional*
    """
    validate(polynomial, FairPolynomial)
    normalized, num_clipped = normalize_queries(inputs, polynomial.structure, transform)
    return clamp_scores(polynomial.evaluate(normalized)), num_clipped

def normalize_queries(inputs: npt.ArrayLike, structure: str,
                      transform: Optional[Transform] = None) -> Tuple[FloatArray, int]:
    """
        Maps raw query inputs into the normalized domain of a polynomial with the given structure,
        clipping out-of-domain points. Returns the normalized inputs (a vector for univariate structure,
        an ``(m, k)`` array otherwise) and the number of clipped points.

        :param inputs: raw query inputs (normalized, if no transform is given)
        :type inputs: array-like
        :param structure: the polynomial structure
        :type structure: ``"univariate"`` or ``"separable"``
        :param transform: the normalization transform
        :type transform: :class:`~spatialfair.geometry.DistanceTransform`, :class:`~spatialfair.geometry.AffineTransform`
                         or :obj:`None`, *optional*
    """
    validate(structure, str)
    validate(transform, Optional[Union[DistanceTransform, AffineTransform]])
    if isinstance(transform, DistanceTransform):
        normalized, num_clipped = transform.apply(inputs)
    elif isinstance(transform, AffineTransform):
        normalized, num_clipped = transform.apply_clipped(inputs)
    else:
        pts = as_points(inputs)
        low = 0.0 if structure == "univariate" else -1.0
        normalized, num_clipped = clip_with_count(pts if pts.shape[1] > 1 else pts[:, 0], low, 1.0)
    if structure == "univariate":
        normalized = np.asarray(normalized).reshape(-1)
    else:
        normalized = as_points(normalized)
    if num_clipped:
        _log.info("Clipped %d query point(s) into the normalized domain.", num_clipped)
    return normalized, num_clipped
