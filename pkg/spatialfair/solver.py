"""
    Bounded-variable least squares: minimizes ``norm(L@a-b)`` subject to ``lower <= a <= upper``.

    The solver is an active-set method. Coefficients are either free or pinned at one of their bounds.
    Each step solves the unconstrained least squares problem on the free coefficients, then moves from the
    current point towards that solution, stopping at the first bound crossed and pinning the coefficient
    which crossed it. When the free solution is feasible, the pinned coefficient whose gradient most
    strongly points into the box is released, and the process repeats. The design matrix is reduced
    by an economic QR factorization once, so that every sub-problem has at most ``q`` rows.

    >>> import numpy as np
    >>> from spatialfair.solver import SolverConfig, bvls_solve
    >>> L = np.array([[1.0, 0.0], [1.0, 0.5], [1.0, 1.0]])
    >>> a, diagnostics = bvls_solve(L, [0.0, 1.0, 2.0], ([-10.0, -1.0], [10.0, 1.0]))
    >>> a
    array([0.5, 1. ])
    >>> diagnostics.converged
    True
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
import time
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union
import warnings
import numpy as np
import numpy.typing as npt
from scipy import linalg
from typing_validation import validate

from spatialfair.bounds import CoefficientBounds
from spatialfair.errors import (ConfigError, DimensionMismatchError, InputError, NonConvergenceWarning,
                                NonFiniteInputError, UnderdeterminedSystemWarning)
from spatialfair.geometry import FloatArray, Real
from spatialfair.polynomial import DesignMatrix

_log = logging.getLogger(__name__)

BoundsLike = Union[CoefficientBounds, Tuple[npt.ArrayLike, npt.ArrayLike]]
""" Type alias for coefficient bounds, either as :class:`~spatialfair.bounds.variants.CoefficientBounds` or as a ``(lower, upper)`` pair. """

class SolverConfig:
    """
        Immutable solver configuration.

        >>> SolverConfig()
        SolverConfig()
        >>> SolverConfig(seed=3).options()
        {'max_iterations': 300, 'tolerance': 0.01, 'seed': 3, 'kkt_tolerance': 1e-09}

        :param max_iterations: maximum number of free-set least squares solves
        :type max_iterations: :obj:`int`, *optional*
        :param tolerance: relative objective change below which a step which leaves the active set unchanged stops the solver
        :type tolerance: :obj:`int` or :obj:`float`, *optional*
        :param seed: if not :obj:`None`, seed for a randomized starting point
        :type seed: :obj:`int` or :obj:`None`, *optional*
        :param kkt_tolerance: optimality tolerance, relative to ``norm(L.T@b)``
        :type kkt_tolerance: :obj:`int` or :obj:`float`, *optional*

        :raises ConfigError: if ``max_iterations < 1``, or some tolerance is not strictly positive
    """

    _max_iterations: int
    _tolerance: float
    _seed: Optional[int]
    _kkt_tolerance: float

    def __init__(self, *, max_iterations: int = 300, tolerance: Real = 1e-2,
                 seed: Optional[int] = None, kkt_tolerance: Real = 1e-9):
        validate(max_iterations, int)
        validate(tolerance, Real)
        validate(seed, Optional[int])
        validate(kkt_tolerance, Real)
        if max_iterations < 1:
            raise ConfigError(f"Maximum number of iterations must be at least 1, found {max_iterations}.")
        if not tolerance > 0 or not kkt_tolerance > 0:
            raise ConfigError("Solver tolerances must be strictly positive.")
        self._max_iterations = max_iterations
        self._tolerance = float(tolerance)
        self._seed = seed
        self._kkt_tolerance = float(kkt_tolerance)

    @property
    def max_iterations(self) -> int:
        """ Maximum number of free-set least squares solves. """
        return self._max_iterations

    @property
    def tolerance(self) -> float:
        """ Relative objective change tolerance. """
        return self._tolerance

    @property
    def seed(self) -> Optional[int]:
        """ Seed for a randomized starting point, or :obj:`None` for the all-zero start. """
        return self._seed

    @property
    def kkt_tolerance(self) -> float:
        """ Optimality tolerance, relative to ``norm(L.T@b)``. """
        return self._kkt_tolerance

    def options(self, skip_defaults: bool = False) -> Mapping[str, Any]:
        """
            The options used to construct this configuration.

            :param skip_defaults: if set to :obj:`True`, only options with non-default values are included
            :type skip_defaults: :obj:`bool`, *optional*
        """
        validate(skip_defaults, bool)
        options: Dict[str, Any] = {}
        if not skip_defaults or self._max_iterations != 300:
            options["max_iterations"] = self._max_iterations
        if not skip_defaults or self._tolerance != 1e-2:
            options["tolerance"] = self._tolerance
        if not skip_defaults or self._seed is not None:
            options["seed"] = self._seed
        if not skip_defaults or self._kkt_tolerance != 1e-9:
            options["kkt_tolerance"] = self._kkt_tolerance
        return options

    def with_options(self, **options: Any) -> SolverConfig:
        r"""
            Returns a new configuration with the given options changed.

            >>> SolverConfig().with_options(max_iterations=10)
            SolverConfig(max_iterations=10)

            :param options: options to set for the new configuration
            :type options: :obj:`~typing.Dict`\ [:obj:`str`, :obj:`~typing.Any`]

            :raises KeyError: if some option name is unknown
        """
        new_options = {**self.options()}
        for name in options:
            if name not in new_options:
                raise KeyError(f"Unknown option {repr(name)} for {type(self).__name__}")
        new_options.update(options)
        return SolverConfig(**new_options)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SolverConfig):
            return NotImplemented
        return self.options() == other.options()

    def __hash__(self) -> int:
        return hash((type(self), tuple(self.options().items())))

    def __repr__(self) -> str:
        options = self.options(skip_defaults=True)
        options_str = ", ".join(f"{name}={repr(value)}" for name, value in options.items())
        return f"SolverConfig({options_str})"

@dataclass(frozen=True)
class SolveDiagnostics:
    """
        Diagnostics of a single solve.

        The ``objective`` is the final residual norm ``norm(L@a-b)``, and ``cost_history`` holds the residual
        norm after each step (starting point first). ``kkt_violation`` is the largest violation of the first
        order optimality conditions over all coefficients, relative to ``norm(L.T@b)``.
        ``stop_reason`` is one of ``"optimal"``, ``"stalled"`` or ``"max_iterations"``.
    """

    iterations: int
    objective: float
    converged: bool
    active_lower: Tuple[int, ...]
    active_upper: Tuple[int, ...]
    kkt_violation: float
    rank_deficient: bool
    stop_reason: str
    cost_history: Tuple[float, ...]
    solve_time: float

    @property
    def active_set(self) -> Tuple[int, ...]:
        """ Indices of the coefficients which ended pinned at a bound, in increasing order. """
        return tuple(sorted(self.active_lower+self.active_upper))

    def to_record(self, prefix: str = "") -> Dict[str, Any]:
        """ Flat record of the scalar diagnostics, for tabular reports. """
        validate(prefix, str)
        return {f"{prefix}iterations": self.iterations, f"{prefix}final_cost": self.objective,
                f"{prefix}converged": self.converged, f"{prefix}solve_time": self.solve_time}

class _ActiveSetState:
    """ Mutable state of a single active-set solve on the QR-reduced problem. """

    # pylint: disable = too-many-instance-attributes

    def __init__(self, r_mat: FloatArray, qtb: FloatArray, residual_sq: float,
                 lower: FloatArray, upper: FloatArray, max_iterations: int):
        # pylint: disable = too-many-arguments
        self.r_mat = r_mat
        self.qtb = qtb
        self.residual_sq = residual_sq
        self.lower = lower
        self.upper = upper
        self.max_iterations = max_iterations
        q = r_mat.shape[1]
        self.x = np.zeros(q)
        self.on_bound = np.zeros(q, dtype=np.int8)
        self.solves = 0
        self.rank_deficient = False
        self.settled = False

    def objective(self) -> float:
        res = self.r_mat@self.x-self.qtb
        return math.sqrt(max(0.0, float(res@res)+self.residual_sq))

    def gradient(self) -> FloatArray:
        return np.asarray(self.r_mat.T@(self.r_mat@self.x-self.qtb), dtype=np.float64)

    def pin(self, idx: int, side: int) -> None:
        self.on_bound[idx] = side
        self.x[idx] = self.lower[idx] if side < 0 else self.upper[idx]

    def descend(self) -> None:
        """
            Moves towards the least squares solution on the free coefficients, pinning coefficients at the
            bounds they cross, until the free solution is feasible (or the iteration budget is exhausted).
        """
        self.settled = False
        while self.solves < self.max_iterations:
            free = np.flatnonzero(self.on_bound == 0)
            if free.size == 0:
                self.settled = True
                return
            pinned = self.on_bound != 0
            target = self.qtb-self.r_mat[:, pinned]@self.x[pinned]
            z, _, rank, _ = linalg.lstsq(self.r_mat[:, free], target, lapack_driver="gelsd")
            self.solves += 1
            if rank < free.size:
                self.rank_deficient = True
            x_free = self.x[free]
            lb_free = self.lower[free]
            ub_free = self.upper[free]
            below = np.flatnonzero(z < lb_free)
            above = np.flatnonzero(z > ub_free)
            if below.size == 0 and above.size == 0:
                self.x[free] = z
                self.settled = True
                return
            crossing = np.concatenate((below, above))
            limits = np.concatenate((lb_free[below], ub_free[above]))
            steps = z[crossing]-x_free[crossing]
            # x is feasible and z is strictly outside, so steps are nonzero
            alphas = np.clip((limits-x_free[crossing])/steps, 0.0, 1.0)
            i = int(np.argmin(alphas))
            alpha = float(alphas[i])
            self.x[free] = x_free+alpha*(z-x_free)
            self.pin(int(free[crossing[i]]), -1 if i < below.size else 1)

def _kkt_violations(g: FloatArray, on_bound: npt.NDArray[np.int8]) -> Tuple[float, float]:
    """ Largest violation of the sign conditions at the bounds, and largest gradient magnitude on free coefficients. """
    at_bound = on_bound != 0
    bound_violation = float(np.max(g[at_bound]*on_bound[at_bound], initial=0.0))
    free_violation = float(np.max(np.abs(g[~at_bound]), initial=0.0))
    return max(0.0, bound_violation), free_violation

def _as_bounds(bounds: BoundsLike, q: int) -> Tuple[FloatArray, FloatArray]:
    if isinstance(bounds, CoefficientBounds):
        lower, upper = bounds.lower, bounds.upper
    else:
        lower = np.asarray(bounds[0], dtype=np.float64).ravel()
        upper = np.asarray(bounds[1], dtype=np.float64).ravel()
    for arr in (lower, upper):
        if arr.size != q:
            raise DimensionMismatchError(int(arr.size), q)
    if np.any(np.isnan(lower)) or np.any(np.isnan(upper)) or np.any(lower > upper):
        raise InputError("Lower bounds must not exceed upper bounds.")
    return np.array(lower, dtype=np.float64), np.array(upper, dtype=np.float64)

def bvls_solve(design: Union[DesignMatrix, npt.ArrayLike], b: npt.ArrayLike, bounds: BoundsLike,
               config: Optional[SolverConfig] = None) -> Tuple[FloatArray, SolveDiagnostics]:
    """
        Minimizes ``norm(L@a-b)`` subject to ``lower <= a <= upper``.

        The returned coefficients satisfy the bounds exactly. The solve is converged when the last free-set solution
        was feasible and no pinned coefficient has a gradient pointing into the box by more than ``kkt_tolerance*norm(L.T@b)``: gradients on the free
        coefficients vanish up to roundoff, since they come from exact least squares solves.

        By default the solve starts at the all-zero vector with every coefficient free. If the configuration
        has a seed, a random subset of the bounded coefficients starts pinned at randomly chosen bounds instead.

        :param design: the design matrix ``L``, of shape ``(m, q)``
        :type design: :class:`~spatialfair.polynomial.design.DesignMatrix` or array-like
        :param b: the target vector, of length ``m``
        :type b: array-like
        :param bounds: the coefficient bounds, of length ``q``
        :type bounds: :class:`~spatialfair.bounds.variants.CoefficientBounds` or pair of array-like
        :param config: the solver configuration (default: ``SolverConfig()``)
        :type config: :class:`SolverConfig` or :obj:`None`, *optional*

        :raises DimensionMismatchError: if ``b`` or the bounds are not aligned with the design matrix
        :raises NonFiniteInputError: if the design matrix or the target contain non-finite values
    """
    # pylint: disable = too-many-locals
    validate(config, Optional[SolverConfig])
    if config is None:
        config = SolverConfig()
    mat = design.matrix if isinstance(design, DesignMatrix) else np.asarray(design, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[1] == 0:
        raise InputError(f"Design matrix must be 2-dimensional with at least one column, found shape {mat.shape}.")
    m, q = mat.shape
    target = np.asarray(b, dtype=np.float64).ravel()
    if target.size != m:
        raise DimensionMismatchError(int(target.size), m)
    if not np.all(np.isfinite(mat)):
        raise NonFiniteInputError("design matrix")
    if not np.all(np.isfinite(target)):
        raise NonFiniteInputError("target")
    lower, upper = _as_bounds(bounds, q)
    if m < q:
        warnings.warn(f"Least squares system has {m} rows and {q} columns: solution is not unique.",
                      UnderdeterminedSystemWarning, stacklevel=2)
    start_time = time.perf_counter()
    q_mat, r_mat = linalg.qr(mat, mode="economic")
    qtb = q_mat.T@target
    residual_sq = float(target@target-qtb@qtb)
    scale = float(np.linalg.norm(r_mat.T@qtb))
    threshold = config.kkt_tolerance*scale
    state = _ActiveSetState(r_mat, qtb, residual_sq, lower, upper, config.max_iterations)
    if config.seed is not None:
        rng = np.random.default_rng(config.seed)
        for idx in np.flatnonzero(np.isfinite(lower) & np.isfinite(upper)):
            if rng.random() < 0.5:
                state.pin(int(idx), -1 if rng.random() < 0.5 else 1)
    history: List[float] = [state.objective()]
    state.descend()
    history.append(state.objective())
    stop_reason = "max_iterations"
    while True:
        g = state.gradient()
        bound_violation, _ = _kkt_violations(g, state.on_bound)
        if state.settled and bound_violation <= threshold:
            stop_reason = "optimal"
            break
        if state.solves >= config.max_iterations:
            break
        previous_bound = state.on_bound.copy()
        scores = np.where(state.on_bound != 0, g*state.on_bound, -np.inf)
        state.on_bound[int(np.argmax(scores))] = 0
        state.descend()
        cost = state.objective()
        cost_change = history[-1]-cost
        history.append(cost)
        _log.debug("BVLS iteration %d: objective %.17g, %d pinned", state.solves, cost, np.count_nonzero(state.on_bound))
        if np.array_equal(previous_bound, state.on_bound) and cost_change <= config.tolerance*max(cost, history[-2]):
            stop_reason = "stalled"
            break
    x = np.clip(state.x, lower, upper)
    residual = mat@x-target
    objective = float(np.linalg.norm(residual))
    g = np.asarray(mat.T@residual, dtype=np.float64)
    bound_violation, free_violation = _kkt_violations(g, state.on_bound)
    converged = state.settled and bound_violation <= threshold
    elapsed = time.perf_counter()-start_time
    diagnostics = SolveDiagnostics(
        iterations=state.solves,
        objective=objective,
        converged=converged,
        active_lower=tuple(int(i) for i in np.flatnonzero(state.on_bound < 0)),
        active_upper=tuple(int(i) for i in np.flatnonzero(state.on_bound > 0)),
        kkt_violation=max(bound_violation, free_violation)/scale if scale > 0 else max(bound_violation, free_violation),
        rank_deficient=state.rank_deficient,
        stop_reason=stop_reason,
        cost_history=tuple(history),
        solve_time=elapsed,
    )
    _log.debug("BVLS finished (%s) after %d solves: objective %.17g", stop_reason, state.solves, objective)
    if not converged:
        warnings.warn(f"Solver stopped ({stop_reason}) after {state.solves} solves before reaching optimality.",
                      NonConvergenceWarning, stacklevel=2)
    return x, diagnostics
