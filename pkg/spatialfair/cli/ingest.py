"""
    Ingestion of delimited text files of scored individuals.

    Files are UTF-8 text with a mandatory header row, in one of two layouts:

    .. code-block:: text

        id,dtr,score
        id,x1,x2,...,xk,score

    Line numbers in error messages are 1-based, with the header on line 1.
"""

from __future__ import annotations

from dataclasses import dataclass
import hashlib
import io
import logging
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
import numpy.typing as npt
import pandas as pd
from typing_validation import validate

from spatialfair.errors import DataFormatError, Error, MalformedRowError
from spatialfair.geometry import DtRVector, FloatArray, Real, Transform, compute_dtr, normalize_coords
from spatialfair.metrics import Mode, ScoredDataset, validate_mode

_log = logging.getLogger(__name__)

_EXTRA_FIELDS = "\x00extra:"

@dataclass(frozen=True, eq=False)
class RawRecords:
    """
        The validated rows of a delimited file, before any geometry is computed.
        ``kind`` is ``"dtr"`` for files with a ``dtr`` column and ``"coords"`` for files with coordinate columns.
    """

    ids: Tuple[str, ...]
    kind: str
    values: FloatArray
    scores: Optional[FloatArray]
    rejected: Tuple[Tuple[int, str], ...]
    digest: str

    @property
    def size(self) -> int:
        """ Number of accepted rows. """
        return len(self.ids)

@dataclass(frozen=True, eq=False)
class IngestResult:
    """
        An ingested dataset, with the raw records and the normalization applied to them.
        In distance-based mode with coordinate columns, ``dtr`` holds the computed DtR vector.
    """

    records: RawRecords
    dataset: ScoredDataset
    transform: Optional[Transform]
    dtr: Optional[DtRVector] = None

    @property
    def ids(self) -> Tuple[str, ...]:
        """ Row identifiers. """
        return self.records.ids

    @property
    def rejected(self) -> Tuple[Tuple[int, str], ...]:
        """ Rejected rows, as ``(line, reason)`` pairs. """
        return self.records.rejected

def file_digest(data: bytes) -> str:
    """
        Content digest of an input file, as recorded in model provenance.

        >>> file_digest(b"")
        'sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855'
    """
    return "sha256:"+hashlib.sha256(data).hexdigest()

def _parse_header(header: Sequence[str], require_scores: bool) -> Tuple[str, int, bool]:
    cols = [c.strip() for c in header]
    if not cols or cols[0] != "id":
        raise DataFormatError("first column must be 'id'", 1)
    has_scores = cols[-1] == "score"
    if require_scores and not has_scores:
        raise DataFormatError("last column must be 'score'", 1)
    middle = cols[1:-1] if has_scores else cols[1:]
    if middle == ["dtr"]:
        return "dtr", 1, has_scores
    expected = [f"x{i+1}" for i in range(len(middle))]
    if middle and middle == expected:
        return "coords", len(middle), has_scores
    raise DataFormatError(f"expected columns 'dtr' or 'x1', ..., 'xk' between 'id' and 'score', found {middle}", 1)

def read_records(path: str, *, delimiter: str = ",", skip_bad: bool = False,
                 require_scores: bool = True) -> RawRecords:
    """
        Reads and validates the rows of a delimited file.

        A row is malformed if it has the wrong number of fields, an empty id, a value which is not a finite
        number, a DtR outside ``[0, 1]`` or a score outside ``[0, 1]``. The first malformed row aborts ingestion
        with a :class:`~spatialfair.errors.MalformedRowError`, unless ``skip_bad`` is set, in which case
        malformed rows are dropped and reported.

        :param path: the file path
        :type path: :obj:`str`
        :param delimiter: the field delimiter
        :type delimiter: :obj:`str`, *optional*
        :param skip_bad: whether to skip malformed rows rather than abort
        :type skip_bad: :obj:`bool`, *optional*
        :param require_scores: whether a final ``score`` column is mandatory
        :type require_scores: :obj:`bool`, *optional*

        :raises DataFormatError: if the file is empty, has an invalid header or no valid rows
        :raises MalformedRowError: if a row is malformed and ``skip_bad`` is not set
    """
    # pylint: disable = too-many-locals
    validate(path, str)
    validate(delimiter, str)
    validate(skip_bad, bool)
    validate(require_scores, bool)
    with open(path, "rb") as f:
        data = f.read()
    digest = file_digest(data)
    try:
        header = pd.read_csv(io.BytesIO(data), sep=delimiter, nrows=0, encoding="utf-8").columns
    except pd.errors.EmptyDataError as e:
        raise DataFormatError("file is empty") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataFormatError(f"unreadable header: {e}", 1) from e
    kind, num_values, has_scores = _parse_header(list(header), require_scores)
    ncols = len(header)

    def flag_extra_fields(bad_line: List[str]) -> List[str]:
        return bad_line[:ncols-1]+[f"{_EXTRA_FIELDS}{len(bad_line)}"]

    try:
        frame = pd.read_csv(io.BytesIO(data), sep=delimiter, dtype=str, keep_default_na=False,
                            skip_blank_lines=False, encoding="utf-8", engine="python",
                            on_bad_lines=flag_extra_fields)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataFormatError(f"unreadable file: {e}") from e
    if frame.shape[0] == 0:
        raise DataFormatError("file has no data rows")
    problems = _row_problems(frame, kind, num_values, has_scores, ncols)
    rejected = tuple(sorted(problems))
    if rejected and not skip_bad:
        line, reason = rejected[0]
        raise MalformedRowError(line, reason)
    for line, reason in rejected:
        _log.warning("Skipping line %d: %s", line, reason)
    bad_rows = {line-2 for line, _ in rejected}
    keep = np.array([i not in bad_rows for i in range(frame.shape[0])], dtype=bool)
    frame = frame[keep]
    if frame.shape[0] == 0:
        raise DataFormatError("file has no valid data rows")
    value_cols = list(frame.columns[1:1+num_values])
    values = frame[value_cols].astype(np.float64).to_numpy()
    scores = frame[frame.columns[-1]].astype(np.float64).to_numpy() if has_scores else None
    _log.info("Read %d row(s) from %s, rejected %d.", frame.shape[0], path, len(rejected))
    return RawRecords(ids=tuple(str(i) for i in frame[frame.columns[0]]), kind=kind,
                      values=values if kind == "coords" else values[:, 0], scores=scores,
                      rejected=rejected, digest=digest)

def _row_problems(frame: pd.DataFrame, kind: str, num_values: int, has_scores: bool,
                  ncols: int) -> List[Tuple[int, str]]:
    # pylint: disable = too-many-arguments
    problems: List[Tuple[int, str]] = []
    for pos, row in enumerate(frame.itertuples(index=False, name=None)):
        line = pos+2
        fields = list(row)
        last = fields[-1]
        if isinstance(last, str) and last.startswith(_EXTRA_FIELDS):
            problems.append((line, f"expected {ncols} fields, found {last[len(_EXTRA_FIELDS):]}"))
            continue
        if any(not isinstance(f, str) for f in fields):
            problems.append((line, f"expected {ncols} fields, found fewer"))
            continue
        if not fields[0].strip():
            problems.append((line, "empty id"))
            continue
        reason = _numeric_problem(fields[1:], kind, num_values, has_scores)
        if reason is not None:
            problems.append((line, reason))
    return problems

def _numeric_problem(fields: Sequence[str], kind: str, num_values: int, has_scores: bool) -> Optional[str]:
    parsed: List[float] = []
    for field in fields:
        try:
            x = float(field)
        except ValueError:
            return f"value {repr(field)} is not a number"
        if not math.isfinite(x):
            return f"value {repr(field)} is not finite"
        parsed.append(x)
    if kind == "dtr" and not 0.0 <= parsed[0] <= 1.0:
        return f"dtr {parsed[0]} outside [0, 1]"
    if has_scores:
        score = parsed[num_values]
        if not 0.0 <= score <= 1.0:
            return f"score {score} outside [0, 1]"
    return None

def ingest(path: str, mode: str = "distance", *, delimiter: str = ",", reference: Optional[npt.ArrayLike] = None,
           p: Real = 2, skip_bad: bool = False) -> IngestResult:
    """
        Ingests a delimited file into a scored dataset, normalizing its inputs.

        - In distance-based mode, a ``dtr`` column is used as is. Coordinate columns require a reference point,
          and DtR values are computed with the ``p``-norm.
        - In zone-based mode, coordinate columns are normalized onto ``[-1, 1]`` per dimension.

        :param path: the file path
        :type path: :obj:`str`
        :param mode: the fairness mode
        :type mode: ``"distance"`` or ``"zone"``, *optional*
        :param delimiter: the field delimiter
        :type delimiter: :obj:`str`, *optional*
        :param reference: the reference point, for distance-based mode with coordinate columns
        :type reference: array-like or :obj:`None`, *optional*
        :param p: the norm order
        :type p: :obj:`int` or :obj:`float`, *optional*
        :param skip_bad: whether to skip malformed rows rather than abort
        :type skip_bad: :obj:`bool`, *optional*

        :raises DataFormatError: if the file layout does not match the mode, or has fewer than two valid rows
    """
    # pylint: disable = too-many-arguments
    fairness_mode: Mode = validate_mode(mode)
    validate(p, Real)
    records = read_records(path, delimiter=delimiter, skip_bad=skip_bad)
    assert records.scores is not None
    if records.size < 2:
        raise DataFormatError("at least two valid data rows are required")
    try:
        if fairness_mode == "zone":
            if records.kind != "coords":
                raise DataFormatError("zone-based mode requires coordinate columns 'x1', ..., 'xk'", 1)
            normalized, affine = normalize_coords(records.values)
            return IngestResult(records, ScoredDataset(normalized, records.scores, mode="zone", p=p), affine)
        if records.kind == "dtr":
            if reference is not None:
                raise DataFormatError("a reference point applies to coordinate columns, not to 'dtr'", 1)
            return IngestResult(records, ScoredDataset(records.values, records.scores), None)
        if reference is None:
            raise DataFormatError("distance-based mode with coordinate columns requires a reference point", 1)
        dtr = compute_dtr(records.values, reference, p)
        return IngestResult(records, ScoredDataset(dtr, records.scores), dtr.transform, dtr)
    except DataFormatError:
        raise
    except Error as e:
        raise DataFormatError(str(e)) from e
