"""Report documents and their serialized forms.

JSON is the complete, versioned, round-trippable schema; CSV is a flat
table of the measures for spreadsheet use (parameters, fit and metadata do
not survive the CSV trip, and ``read_report`` gives them back as None /
empty).  Both encodings are byte-deterministic for equal documents: fixed
key order, fixed line endings, and every float rendered with 17 significant
digits, so parsing a report reproduces the exact binary values.  The
standard json encoder cannot be told to format floats that way, which is
why the emitter below exists; parsing still goes through ``json.loads``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from . import __version__
from .errors import InvalidParamsError
from .estimate import RegressionFit
from .model import MeasureSource, MobilityReport, ModelParams

__all__ = [
    "SCHEMA_VERSION",
    "ReportDocument",
    "standard_metadata",
    "fmt_float",
    "json_bytes",
    "write_report",
    "read_report",
]

SCHEMA_VERSION = 1

_PARAM_FIELDS = ("mu_p", "sigma_p", "mu_c", "sigma_c", "rho")
_FIT_FIELDS = ("alpha", "beta", "n", "residual_variance")
_MEASURE_FIELDS = ("source", "beta", "alpha", "relative_mobility", "absolute_mobility")


@dataclass(frozen=True)
class ReportDocument:
    """A full report: the measures plus whatever context produced them."""

    measures: Sequence[MobilityReport]
    params: Optional[ModelParams] = None
    fit: Optional[RegressionFit] = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        measures = tuple(self.measures)
        for m in measures:
            if not isinstance(m, MobilityReport):
                raise InvalidParamsError(f"measures must be MobilityReport, got {type(m).__name__}")
        object.__setattr__(self, "measures", measures)
        if self.params is not None and not isinstance(self.params, ModelParams):
            raise InvalidParamsError(f"params must be ModelParams or None, got {type(self.params).__name__}")
        if self.fit is not None and not isinstance(self.fit, RegressionFit):
            raise InvalidParamsError(f"fit must be RegressionFit or None, got {type(self.fit).__name__}")
        object.__setattr__(self, "metadata", dict(self.metadata))


def standard_metadata(
    *,
    seed: Optional[int] = None,
    n: Optional[int] = None,
    timestamp: Optional[str] = None,
    **extra: object,
) -> dict[str, object]:
    """Metadata block in its canonical key order.

    ``timestamp`` defaults to None (not the wall clock) so that identical
    runs produce identical bytes; pass an explicit string to stamp one.
    """
    meta: dict[str, object] = {
        "seed": None if seed is None else int(seed),
        "n": None if n is None else int(n),
        "version": __version__,
        "timestamp": timestamp,
    }
    for key in sorted(extra):
        meta[key] = extra[key]
    return meta


def fmt_float(value: float) -> str:
    """A float with 17 significant digits, the number that guarantees the
    decimal-to-binary round trip is exact."""
    v = float(value)
    if not math.isfinite(v):
        raise InvalidParamsError(f"reports carry finite numbers only, got {v!r}")
    return format(v, ".17g")


def _json_scalar(value: object) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise InvalidParamsError(f"cannot serialize {type(value).__name__} in a report")


def _json_value(value: object, level: int) -> str:
    pad = "  " * level
    inner_pad = "  " * (level + 1)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner_pad}{json.dumps(str(k))}: {_json_value(v, level + 1)}" for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(f"{inner_pad}{_json_value(v, level + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    return _json_scalar(value)


def json_bytes(value: object) -> bytes:
    """Any nesting of dicts, sequences and scalars as deterministic JSON
    bytes (17 significant digits per float, trailing newline)."""
    return (_json_value(value, 0) + "\n").encode("utf-8")


def _measure_mapping(m: MobilityReport) -> dict[str, object]:
    return {
        "source": m.source.value,
        "beta": m.beta,
        "alpha": m.alpha,
        "relative_mobility": m.relative_mobility,
        "absolute_mobility": m.absolute_mobility,
    }


def document_mapping(doc: ReportDocument) -> dict[str, object]:
    """The document as plain dicts in canonical key order."""
    params = None
    if doc.params is not None:
        params = {name: getattr(doc.params, name) for name in _PARAM_FIELDS}
    fit = None
    if doc.fit is not None:
        fit = {name: getattr(doc.fit, name) for name in _FIT_FIELDS}
    return {
        "schema_version": SCHEMA_VERSION,
        "params": params,
        "fit": fit,
        "measures": [_measure_mapping(m) for m in doc.measures],
        "metadata": dict(doc.metadata),
    }


def write_report(doc: ReportDocument, fmt: str = "json") -> bytes:
    """Serialize a document; ``fmt`` is ``"json"`` or ``"csv"``."""
    if fmt == "json":
        return (_json_value(document_mapping(doc), 0) + "\n").encode("utf-8")
    if fmt == "csv":
        lines = [",".join(_MEASURE_FIELDS)]
        for m in doc.measures:
            lines.append(
                ",".join(
                    (
                        m.source.value,
                        fmt_float(m.beta),
                        fmt_float(m.alpha),
                        fmt_float(m.relative_mobility),
                        fmt_float(m.absolute_mobility),
                    )
                )
            )
        return ("\r\n".join(lines) + "\r\n").encode("utf-8")
    raise InvalidParamsError(f"unknown report format {fmt!r}; use 'json' or 'csv'")


def _measure_from_mapping(entry: Mapping[str, object]) -> MobilityReport:
    try:
        return MobilityReport(
            beta=float(entry["beta"]),
            alpha=float(entry["alpha"]),
            relative_mobility=float(entry["relative_mobility"]),
            absolute_mobility=float(entry["absolute_mobility"]),
            source=MeasureSource(str(entry["source"])),
        )
    except KeyError as exc:
        raise InvalidParamsError(f"measure entry is missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise InvalidParamsError(f"bad measure entry: {exc}") from None


def read_report(data: Union[bytes, str], fmt: str = "json") -> ReportDocument:
    """Parse :func:`write_report` output back into a document."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParamsError(f"report is not valid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise InvalidParamsError("report must be a JSON object")
        version = obj.get("schema_version")
        if version != SCHEMA_VERSION:
            raise InvalidParamsError(
                f"unsupported schema_version {version!r}; this build reads {SCHEMA_VERSION}"
            )
        params = obj.get("params")
        fit = obj.get("fit")
        try:
            return ReportDocument(
                measures=tuple(_measure_from_mapping(m) for m in obj.get("measures", [])),
                params=None if params is None else ModelParams(**{k: float(params[k]) for k in _PARAM_FIELDS}),
                fit=None
                if fit is None
                else RegressionFit(
                    alpha=float(fit["alpha"]),
                    beta=float(fit["beta"]),
                    n=int(fit["n"]),
                    residual_variance=float(fit["residual_variance"]),
                ),
                metadata=obj.get("metadata", {}),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidParamsError(f"malformed report document: {exc!r}") from None
    if fmt == "csv":
        rows = [r for r in text.split("\r\n") if r]
        if not rows or rows[0] != ",".join(_MEASURE_FIELDS):
            raise InvalidParamsError("CSV report must start with the measures header")
        measures = []
        for row in rows[1:]:
            cells = row.split(",")
            if len(cells) != len(_MEASURE_FIELDS):
                raise InvalidParamsError(f"CSV measure row has {len(cells)} cells, expected {len(_MEASURE_FIELDS)}")
            measures.append(_measure_from_mapping(dict(zip(_MEASURE_FIELDS, cells))))
        return ReportDocument(measures=tuple(measures))
    raise InvalidParamsError(f"unknown report format {fmt!r}; use 'json' or 'csv'")
