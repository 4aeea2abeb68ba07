"""
    Command line interface.

    .. code-block:: console

        $ spatialfair fit --mode distance --input scores.csv --c 1 --degree 5 --model-out model.json
        $ spatialfair audit --input scores.csv --c 1
        $ spatialfair sweep --input scores.csv --c-grid 1,5,25 --n-grid 1:15 --report-out tradeoff.csv

    Exit codes:

    - ``0`` success
    - ``1`` usage error (invalid flags or configuration)
    - ``2`` data error (unreadable or malformed input or model files)
    - ``3`` solver non-convergence (all artifacts are still written, with ``converged`` false)
"""

from __future__ import annotations

import argparse
from contextlib import contextmanager
import logging
import sys
from typing import Any, Callable, Iterator, List, Mapping, Optional, Sequence, TextIO, Tuple
import numpy as np
import pandas as pd

from spatialfair import random
from spatialfair.bounds import FairnessConfig
from spatialfair.errors import ConfigError, DataFormatError, Error, InputError, ModelFormatError
from spatialfair.geometry import AffineTransform, DistanceTransform, FloatArray
from spatialfair.mechanisms import (BaselineParams, baseline_threshold, fit_fair, normalize_queries,
                                    predict_scores, select_degree, sweep_tradeoff)
from spatialfair.metrics import ScoredDataset, clamp_scores, pairwise_audit
from spatialfair.solver import SolverConfig
from .ingest import IngestResult, RawRecords, ingest, read_records
from .modelfile import ModelFile, provenance_timestamp
from .reports import (AUDIT_COLUMNS, BASELINE_COLUMNS, CURVE_COLUMNS, FIT_COLUMNS, SELECT_COLUMNS,
                      SWEEP_COLUMNS, write_scores, write_table)

_log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NONCONVERGENCE = 3

class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message: str) -> Any:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")

def parse_float_list(text: str) -> List[float]:
    """
        Parses a comma-separated list of floats.

        >>> parse_float_list("1,5,25")
        [1.0, 5.0, 25.0]

        :raises ConfigError: if the list is empty or some item is not a number
    """
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"Invalid list of numbers {repr(text)}.") from e
    if not values:
        raise ConfigError(f"Empty list of numbers {repr(text)}.")
    return values

def parse_int_grid(text: str) -> List[int]:
    """
        Parses a comma-separated list of integers, where items of the form ``a:b`` stand for
        the inclusive range from ``a`` to ``b``.

        >>> parse_int_grid("1:3,5")
        [1, 2, 3, 5]

        :raises ConfigError: if the grid is empty or some item is malformed
    """
    values: List[int] = []
    try:
        for item in text.split(","):
            if not item.strip():
                continue
            if ":" in item:
                start, stop = item.split(":")
                values.extend(range(int(start), int(stop)+1))
            else:
                values.append(int(item))
    except ValueError as e:
        raise ConfigError(f"Invalid integer grid {repr(text)}.") from e
    if not values:
        raise ConfigError(f"Empty integer grid {repr(text)}.")
    return values

def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)
    logging.captureWarnings(True)

@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        yield f

def _emit(records: Sequence[Mapping[str, Any]], columns: Sequence[str], path: Optional[str]) -> None:
    with _output(path) as out:
        write_table(records, columns, out)

def _reference(args: argparse.Namespace) -> Optional[List[float]]:
    if args.reference is None:
        return None
    return parse_float_list(args.reference)

def _ingest(args: argparse.Namespace) -> IngestResult:
    return ingest(args.input, args.mode, delimiter=args.delimiter, reference=_reference(args),
                  p=args.p, skip_bad=args.skip_bad)

def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(max_iterations=args.max_iterations, tolerance=args.tolerance,
                        seed=args.seed if args.random_start else None)

def _model_queries(model: ModelFile, records: RawRecords) -> FloatArray:
    transform = model.transform
    if isinstance(transform, (DistanceTransform, AffineTransform)):
        if records.kind != "coords":
            raise DataFormatError("the model expects coordinate columns 'x1', ..., 'xk'", 1)
    elif model.config.mode == "distance" and records.kind != "dtr":
        raise DataFormatError("the model expects a 'dtr' column", 1)
    elif model.config.mode == "zone" and records.kind != "coords":
        raise DataFormatError("the model expects coordinate columns 'x1', ..., 'xk'", 1)
    return records.values

def cmd_fit(args: argparse.Namespace) -> int:
    """
        Fits a c-fair polynomial, writing the model file, the fair scores and the fit report.
    """
    result = _ingest(args)
    data = result.dataset
    config = FairnessConfig(args.c, args.degree, dimension=data.dimension, p=args.p, mode=args.mode)
    solver = _solver_config(args)
    report = fit_fair(data, config, solver, transform=result.transform, audit_sample=args.sample_pairs,
                      seed=args.seed, workers=args.workers)
    if args.model_out is not None:
        model = ModelFile.from_report(report, input_digest=result.records.digest,
                                      timestamp=provenance_timestamp(args.input), solver=solver)
        model.save(args.model_out)
    if args.scores_out is not None:
        with _output(args.scores_out) as out:
            write_scores(result.ids, data.scores, report.fair_scores, out)
    record = report.to_record()
    record["original_unfairness_pct"] = data.audit_original(
        config.c, sample=args.sample_pairs, seed=args.seed, workers=args.workers).unfairness_pct
    record["rows"] = data.size
    record["rejected_rows"] = len(result.rejected)
    _emit([record], FIT_COLUMNS, args.report_out)
    if not report.diagnostics.converged:
        _log.error("Solver did not converge (%s).", report.diagnostics.stop_reason)
        return EXIT_NONCONVERGENCE
    return EXIT_OK

def cmd_audit(args: argparse.Namespace) -> int:
    """
        Audits the scores of the input file, or the scores a saved model assigns to its rows.
    """
    if args.model_in is None:
        data = _ingest(args).dataset
        audit = data.audit_original(args.c, sample=args.sample_pairs, seed=args.seed, workers=args.workers)
    else:
        model = ModelFile.load(args.model_in)
        records = read_records(args.input, delimiter=args.delimiter, skip_bad=args.skip_bad, require_scores=False)
        normalized, _ = normalize_queries(_model_queries(model, records), model.polynomial.structure, model.transform)
        scores = clamp_scores(model.polynomial.evaluate(normalized))
        data = ScoredDataset(normalized, scores, mode=model.config.mode, p=model.config.p)
        audit = pairwise_audit(data, scores, args.c, sample=args.sample_pairs, seed=args.seed, workers=args.workers)
    _emit([audit.to_record()], AUDIT_COLUMNS, args.report_out)
    return EXIT_OK

def cmd_baseline(args: argparse.Namespace) -> int:
    """
        Runs the threshold baseline, writing the adjusted scores and the baseline report.
    """
    result = _ingest(args)
    data = result.dataset
    params = BaselineParams(args.threshold, args.alpha)
    report = baseline_threshold(data, params, args.c, audit_sample=args.sample_pairs, seed=args.seed,
                                workers=args.workers)
    if args.scores_out is not None:
        with _output(args.scores_out) as out:
            write_scores(result.ids, data.scores, report.fair_scores, out)
    record = {"threshold": params.threshold, "alpha": params.alpha, **report.audit.to_record(),
              "fitting_error": report.fitting_error}
    record["original_unfairness_pct"] = data.audit_original(
        args.c, sample=args.sample_pairs, seed=args.seed, workers=args.workers).unfairness_pct
    _emit([record], BASELINE_COLUMNS, args.report_out)
    return EXIT_OK

def cmd_sweep(args: argparse.Namespace) -> int:
    """
        Sweeps a grid of fairness constants and degrees, writing one table row per grid cell.
    """
    c_values = parse_float_list(args.c_grid)
    degrees = parse_int_grid(args.n_grid)
    data = _ingest(args).dataset
    rows = sweep_tradeoff(data, c_values, degrees, _solver_config(args), workers=args.workers,
                          audit_sample=args.sample_pairs, seed=args.seed)
    _emit([row.to_record() for row in rows], SWEEP_COLUMNS, args.report_out)
    if any(not row.error and not row.converged for row in rows):
        _log.error("Solver did not converge on some grid cells.")
        return EXIT_NONCONVERGENCE
    return EXIT_OK

def cmd_select_degree(args: argparse.Namespace) -> int:
    """
        Selects the polynomial degree over a grid, optionally writing the model fitted at the selected degree.
    """
    degrees = parse_int_grid(args.n_grid)
    result = _ingest(args)
    solver = _solver_config(args)
    best, rows = select_degree(result.dataset, args.c, degrees, solver, audit_sample=args.sample_pairs,
                               seed=args.seed)
    records = []
    for row in rows:
        report = row.report
        records.append({"n": row.degree, "criterion": row.criterion,
                        "fitting_error": None if report is None else report.fitting_error,
                        "unfairness_pct": None if report is None else report.audit.unfairness_pct,
                        "skipped": row.skipped, "selected": row.degree == best})
    _emit(records, SELECT_COLUMNS, args.report_out)
    selected = next(row.report for row in rows if row.degree == best)
    assert selected is not None
    if args.model_out is not None:
        model = ModelFile.from_report(selected, input_digest=result.records.digest,
                                      timestamp=provenance_timestamp(args.input), solver=solver)
        model.save(args.model_out)
    _log.info("Selected degree %d.", best)
    if not selected.diagnostics.converged:
        _log.error("Solver did not converge at the selected degree.")
        return EXIT_NONCONVERGENCE
    return EXIT_OK

def cmd_predict(args: argparse.Namespace) -> int:
    """
        Applies a saved model to the rows of an input file, whose score column is optional.
    """
    model = ModelFile.load(args.model_in)
    records = read_records(args.input, delimiter=args.delimiter, skip_bad=args.skip_bad, require_scores=False)
    scores, num_clipped = predict_scores(model.polynomial, _model_queries(model, records), model.transform)
    if num_clipped:
        _log.warning("%d of %d query row(s) were clipped into the model domain.", num_clipped, records.size)
    with _output(args.scores_out) as out:
        write_scores(records.ids, records.scores, scores, out)
    return EXIT_OK

def cmd_curve(args: argparse.Namespace) -> int:
    """
        Emits the values of a saved univariate model on a uniform grid over ``[0, 1]``.
    """
    model = ModelFile.load(args.model_in)
    if model.polynomial.structure != "univariate":
        raise ConfigError("Curves are only available for univariate models.")
    if args.points < 2:
        raise ConfigError(f"At least two curve points are required, found {args.points}.")
    x = np.linspace(0.0, 1.0, args.points)
    values = model.polynomial.evaluate(x)
    fair = clamp_scores(values)
    _emit([{"x": float(a), "value": float(b), "fair_score": float(f)} for a, b, f in zip(x, values, fair)],
          CURVE_COLUMNS, args.report_out)
    return EXIT_OK

def cmd_synth(args: argparse.Namespace) -> int:
    """
        Writes a seeded synthetic dataset: DtR values in distance-based mode, coordinates in ``[-1, 1]``
        in zone-based mode, with smooth noisy scores.
    """
    if args.size < 2:
        raise ConfigError(f"Synthetic datasets need at least two rows, found {args.size}.")
    with random.options(seed=args.seed):
        data = next(random.rand_dataset(mode=args.mode, size=args.size, dim=args.dim, p=args.p, noise=args.noise))
    columns = ["dtr"] if args.mode == "distance" else [f"x{i+1}" for i in range(data.dimension)]
    frame = pd.DataFrame({"id": [f"u{i+1}" for i in range(data.size)]})
    for j, col in enumerate(columns):
        frame[col] = [repr(float(v)) for v in data.inputs[:, j]]
    frame["score"] = [repr(float(s)) for s in data.scores]
    with _output(args.output) as out:
        frame.to_csv(out, index=False, lineterminator="\n")
    return EXIT_OK

def _data_args(parser: argparse.ArgumentParser, *, mode: bool = True) -> None:
    parser.add_argument("--input", required=True, help="input file, with header 'id,dtr,score' or 'id,x1,...,xk,score'")
    if mode:
        parser.add_argument("--mode", choices=("distance", "zone"), default="distance", help="fairness mode")
        parser.add_argument("--p", type=float, default=2.0, help="norm order, at least 1 ('inf' for Chebyshev)")
        parser.add_argument("--reference", help="comma-separated reference point, to compute DtR from coordinates")
    parser.add_argument("--delimiter", default=",", help="field delimiter")
    parser.add_argument("--skip-bad", action="store_true", help="skip malformed rows instead of aborting")

def _audit_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sample-pairs", type=int, default=None, help="audit this many sampled pairs")
    parser.add_argument("--workers", type=int, default=1, help="number of concurrent workers")

def _solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-iterations", type=int, default=300, help="solver iteration cap")
    parser.add_argument("--tolerance", type=float, default=1e-2, help="solver relative cost tolerance")
    parser.add_argument("--random-start", action="store_true", help="seeded random solver starting point")

def build_parser() -> argparse.ArgumentParser:
    """
        The argument parser, with one subcommand per ``cmd_*`` function.
    """
    common = _ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="log more (repeatable)")
    common.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser = _ArgumentParser(prog="spatialfair", description="Individual spatial fairness for likelihood scores.")
    sub = parser.add_subparsers(dest="command_name", required=True)
    commands: List[Tuple[str, Callable[[argparse.Namespace], int], str]] = [
        ("fit", cmd_fit, "fit a c-fair polynomial"),
        ("audit", cmd_audit, "audit scores for pairwise fairness violations"),
        ("baseline", cmd_baseline, "run the threshold baseline"),
        ("sweep", cmd_sweep, "sweep the fairness/utility trade-off over c and n"),
        ("select-degree", cmd_select_degree, "select the polynomial degree"),
        ("predict", cmd_predict, "apply a saved model to new inputs"),
        ("curve", cmd_curve, "emit plot data for a saved univariate model"),
        ("synth", cmd_synth, "write a synthetic dataset"),
    ]
    parsers = {}
    for name, func, description in commands:
        p = sub.add_parser(name, help=description, description=description, parents=[common])
        p.set_defaults(command=func)
        parsers[name] = p
    for name in ("fit", "audit", "baseline", "sweep", "select-degree"):
        _data_args(parsers[name])
        _audit_args(parsers[name])
        parsers[name].add_argument("--report-out", help="report file (default: standard output)")
    for name in ("fit", "sweep", "select-degree"):
        _solver_args(parsers[name])
    for name in ("fit", "audit", "baseline", "select-degree"):
        parsers[name].add_argument("--c", type=float, required=name != "baseline", default=1.0,
                                   help="fairness constant, at least 1")
    parsers["fit"].add_argument("--degree", type=int, required=True, help="polynomial degree, at least 1")
    for name in ("fit", "select-degree"):
        parsers[name].add_argument("--model-out", help="model file to write")
    for name in ("fit", "baseline"):
        parsers[name].add_argument("--scores-out", help="scores file to write")
    parsers["audit"].add_argument("--model-in", help="audit the scores of this model instead of the input scores")
    parsers["baseline"].add_argument("--threshold", type=float, default=0.5, help="decision threshold")
    parsers["baseline"].add_argument("--alpha", type=float, default=0.0, help="maximum score adjustment")
    parsers["sweep"].add_argument("--c-grid", default="1,5,25", help="comma-separated fairness constants")
    parsers["sweep"].add_argument("--n-grid", default="1,5,10,15", help="degrees, e.g. '1,5,10' or '1:15'")
    parsers["select-degree"].add_argument("--n-grid", default="1:10", help="candidate degrees, e.g. '1:10'")
    _data_args(parsers["predict"], mode=False)
    parsers["predict"].add_argument("--model-in", required=True, help="model file to apply")
    parsers["predict"].add_argument("--scores-out", help="scores file (default: standard output)")
    parsers["curve"].add_argument("--model-in", required=True, help="univariate model file")
    parsers["curve"].add_argument("--points", type=int, default=101, help="number of grid points")
    parsers["curve"].add_argument("--report-out", help="curve file (default: standard output)")
    synth = parsers["synth"]
    synth.add_argument("--output", required=True, help="dataset file to write")
    synth.add_argument("--mode", choices=("distance", "zone"), default="distance", help="fairness mode")
    synth.add_argument("--size", type=int, default=200, help="number of rows")
    synth.add_argument("--dim", type=int, default=2, help="number of coordinates (zone-based mode)")
    synth.add_argument("--p", type=float, default=2.0, help="norm order")
    synth.add_argument("--noise", type=float, default=0.1, help="score noise standard deviation")
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    """
        Entry point of the ``spatialfair`` command, returning the exit code.

        :param argv: the command line arguments (default: ``sys.argv[1:]``)
        :type argv: :obj:`~typing.Sequence`\\ [:obj:`str`] or :obj:`None`, *optional*
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args.verbose, args.quiet)
    try:
        code: int = args.command(args)
        return code
    except ConfigError as e:
        _log.error("%s", e)
        return EXIT_USAGE
    except (DataFormatError, InputError, ModelFormatError) as e:
        _log.error("%s", e)
        return EXIT_DATA
    except OSError as e:
        _log.error("%s", e)
        return EXIT_DATA
    except Error as e:
        _log.error("%s", e)
        return EXIT_DATA
