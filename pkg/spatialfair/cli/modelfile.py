"""
    Versioned model files for fitted c-fair polynomials.

    Model files are UTF-8 JSON documents, with keys in a fixed order and ``format_version`` first:

    .. code-block:: text

        {
          "format_version": 1,
          "mode": "distance",
          "k": 1,
          "p": 2.0,
          "n": 3,
          "c": 1.0,
          "variant": "univariate",
          "transform": null,
          "coefficients": [...],
          "provenance": {"input_digest": "sha256:...", "timestamp": "...", "solver": {...}}
        }

    Infinite norm orders are written as the string ``"inf"``. Floats are written in shortest round-trip form,
    so that save, load and save again produce byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
import json
import os
from typing import Any, Dict, Mapping, Optional
from typing_validation import validate

from spatialfair.bounds import FairnessConfig
from spatialfair.errors import Error, ModelFormatError
from spatialfair.geometry import Transform, transform_from_dict
from spatialfair.mechanisms import FitReport
from spatialfair.polynomial import FairPolynomial, SeparablePolynomial, UnivariatePolynomial
from spatialfair.solver import SolverConfig

FORMAT_VERSION = 1

_KEYS = ("format_version", "mode", "k", "p", "n", "c", "variant", "transform", "coefficients", "provenance")

def provenance_timestamp(input_path: Optional[str] = None) -> str:
    """
        The provenance timestamp: the ``SOURCE_DATE_EPOCH`` environment variable if set, otherwise the
        modification time of the input file, otherwise the current time. Formatted as ISO 8601 UTC, to the second.

        :param input_path: the input file the model was fitted on
        :type input_path: :obj:`str` or :obj:`None`, *optional*
    """
    validate(input_path, Optional[str])
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None and epoch.strip():
        seconds = int(epoch)
    elif input_path is not None:
        seconds = int(os.path.getmtime(input_path))
    else:
        seconds = int(datetime.now(timezone.utc).timestamp())
    return datetime.fromtimestamp(seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

@dataclass(frozen=True, eq=False)
class ModelFile:
    """
        A fitted model with everything needed to apply it to fresh raw inputs, and its provenance.
    """

    config: FairnessConfig
    variant: str
    polynomial: FairPolynomial
    transform: Optional[Transform]
    input_digest: str
    timestamp: str
    solver: Mapping[str, Any]

    @staticmethod
    def from_report(report: FitReport, *, input_digest: str, timestamp: str,
                    solver: Optional[SolverConfig] = None) -> ModelFile:
        """
            Model file for a fit.

            :param report: the fit report
            :type report: :class:`~spatialfair.mechanisms.FitReport`
            :param input_digest: content digest of the input file
            :type input_digest: :obj:`str`
            :param timestamp: provenance timestamp
            :type timestamp: :obj:`str`
            :param solver: the solver configuration used
            :type solver: :class:`~spatialfair.solver.SolverConfig` or :obj:`None`, *optional*
        """
        validate(report, FitReport)
        validate(input_digest, str)
        validate(timestamp, str)
        validate(solver, Optional[SolverConfig])
        solver_options = dict((solver or SolverConfig()).options())
        return ModelFile(report.config, report.variant, report.polynomial, report.transform,
                         input_digest, timestamp, solver_options)

    def to_dict(self) -> Dict[str, Any]:
        """ Plain-data representation, with keys in file order. """
        data = {"format_version": FORMAT_VERSION}
        data.update(self.config.to_dict())
        data["variant"] = self.variant
        data["transform"] = None if self.transform is None else self.transform.to_dict()
        data["coefficients"] = [float(a) for a in self.polynomial.coefficients]
        data["provenance"] = {"input_digest": self.input_digest, "timestamp": self.timestamp,
                              "solver": dict(self.solver)}
        return {key: data[key] for key in _KEYS}

    def dumps(self) -> str:
        """ The model file text. """
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)+"\n"

    def save(self, path: str) -> None:
        """
            Writes the model file.

            :param path: the file path
            :type path: :obj:`str`
        """
        validate(path, str)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.dumps())

    @staticmethod
    def loads(text: str) -> ModelFile:
        """
            Parses model file text.

            :param text: the model file text
            :type text: :obj:`str`

            :raises ModelFormatError: if the text is not a valid model file of a supported version
        """
        validate(text, str)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"Model file is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ModelFormatError("Model file must hold a JSON object.")
        if data.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(f"Unsupported model format version {repr(data.get('format_version'))}, "
                                   f"expected {FORMAT_VERSION}.")
        missing = [key for key in _KEYS if key not in data]
        if missing:
            raise ModelFormatError(f"Model file is missing keys {missing}.")
        try:
            return _from_dict(data)
        except (Error, ValueError, TypeError, KeyError) as e:
            raise ModelFormatError(f"Invalid model file: {e}") from e

    @staticmethod
    def load(path: str) -> ModelFile:
        """
            Reads a model file.

            :param path: the file path
            :type path: :obj:`str`

            :raises ModelFormatError: if the file is not a valid model file of a supported version
        """
        validate(path, str)
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"Model file is not UTF-8 text: {e}") from e
        return ModelFile.loads(text)

def _from_dict(data: Mapping[str, Any]) -> ModelFile:
    config = FairnessConfig.from_dict(data)
    coefficients = data["coefficients"]
    validate(coefficients, list)
    polynomial: FairPolynomial
    if config.structure == "univariate":
        polynomial = UnivariatePolynomial(coefficients)
        if polynomial.degree != config.degree:
            raise ValueError(f"expected {config.degree+1} coefficients, found {len(coefficients)}")
    else:
        polynomial = SeparablePolynomial.from_coefficients(coefficients, config.dimension, config.degree)
    transform = None if data["transform"] is None else transform_from_dict(data["transform"])
    provenance = data["provenance"]
    validate(provenance, Dict[str, Any])
    solver = provenance["solver"]
    validate(solver, Dict[str, Any])
    return ModelFile(config, str(data["variant"]), polynomial, transform,
                     str(provenance["input_digest"]), str(provenance["timestamp"]), solver)
