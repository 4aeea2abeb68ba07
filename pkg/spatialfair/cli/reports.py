"""
    Report tables emitted by the command line interface.

    Reports are comma-separated tables with a header row and one metric per column, in the fixed
    column orders listed below. Floats are written with 9 significant digits, booleans as ``true``/``false``.
    The scores file is the exception: scores are written in shortest round-trip form, at full precision.
"""

from __future__ import annotations

import math
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO
import numpy as np
import numpy.typing as npt
import pandas as pd
from typing_validation import validate

AUDIT_COLUMNS = ("total_pairs", "violated_pairs", "unfairness_pct", "max_violation", "c_used", "sampled")
""" Columns of audit reports. """

FIT_COLUMNS = ("mode", "k", "p", "n", "c", "variant", *AUDIT_COLUMNS, "unfairness_pct_c1",
               "original_unfairness_pct", "fitting_error", "lipschitz_constant", "degenerate_dimensions",
               "iterations", "final_cost", "converged", "solve_time", "rows", "rejected_rows")
""" Columns of fit reports. """

BASELINE_COLUMNS = ("threshold", "alpha", *AUDIT_COLUMNS, "original_unfairness_pct", "fitting_error")
""" Columns of baseline reports. """

SWEEP_COLUMNS = ("c", "n", "unfairness_pct", "unfairness_pct_c1", "original_unfairness_pct", "fitting_error",
                 "solve_time", "iterations", "final_cost", "converged", "variant", "error")
""" Columns of trade-off sweep tables, one row per grid cell. """

SELECT_COLUMNS = ("n", "criterion", "fitting_error", "unfairness_pct", "skipped", "selected")
""" Columns of degree selection tables. """

CURVE_COLUMNS = ("x", "value", "fair_score")
""" Columns of polynomial curve tables. """

SCORES_COLUMNS = ("id", "original_score", "fair_score")
""" Columns of scores files. """

FLOAT_FORMAT = "%.9g"

def _cell(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value == math.inf:
        return "inf"
    return value

def records_frame(records: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    r"""
        Table of the given records, restricted to the given columns, in that order.
        Missing values are left empty.

        >>> records_frame([{"c": 1.0, "n": 2, "extra": "x"}], ("n", "c")).columns.tolist()
        ['n', 'c']

        :param records: the records
        :type records: :obj:`~typing.Iterable`\ [:obj:`~typing.Mapping`\ [:obj:`str`, :obj:`~typing.Any`]]
        :param columns: the columns
        :type columns: :obj:`~typing.Sequence`\ [:obj:`str`]
    """
    rows: List[Dict[str, Any]] = [{col: _cell(record.get(col)) for col in columns} for record in records]
    return pd.DataFrame(rows, columns=list(columns))

def write_table(records: Iterable[Mapping[str, Any]], columns: Sequence[str], out: TextIO) -> None:
    r"""
        Writes a report table.

        :param records: the records, one per row
        :type records: :obj:`~typing.Iterable`\ [:obj:`~typing.Mapping`\ [:obj:`str`, :obj:`~typing.Any`]]
        :param columns: the columns, in order
        :type columns: :obj:`~typing.Sequence`\ [:obj:`str`]
        :param out: the output stream
        :type out: :obj:`~typing.TextIO`
    """
    records_frame(records, columns).to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

def write_scores(ids: Sequence[str], original: Optional[npt.ArrayLike], fair: npt.ArrayLike, out: TextIO) -> None:
    r"""
        Writes a scores file, with columns ``id,original_score,fair_score``.
        Scores are written at full precision, so that unchanged scores are written identically.
        Without original scores, the ``original_score`` column is omitted.

        :param ids: the row identifiers
        :type ids: :obj:`~typing.Sequence`\ [:obj:`str`]
        :param original: the original scores
        :type original: array-like or :obj:`None`
        :param fair: the fair scores
        :type fair: array-like
        :param out: the output stream
        :type out: :obj:`~typing.TextIO`
    """
    validate(ids, Sequence[str])
    columns = {"id": list(ids)}
    if original is not None:
        columns["original_score"] = [repr(float(s)) for s in np.asarray(original, dtype=np.float64)]
    columns["fair_score"] = [repr(float(s)) for s in np.asarray(fair, dtype=np.float64)]
    frame = pd.DataFrame(columns)
    frame.to_csv(out, index=False, lineterminator="\n")

