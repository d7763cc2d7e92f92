"""JSON coefficient files and report emission.

A series file looks like::

    {"p": 3, "N": 40, "M": 64, "kappa_gamma": 4,
     "coefficients": ["1", "0", ...],
     "metadata": {"curve": "...", "character": "...", "flavor": "plus"}}

Coefficients are base-10 strings so that exporters in any language can
produce them without word-size limits.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import re
from pathlib import Path

from .padic import PadicContext, PadicInt, is_prime
from .series import TruncatedSeries

_DIGITS = re.compile(r"[0-9]+\Z")


class SeriesFileError(ValueError):
    """Schema violation in a series file; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _int_field(data: dict, name: str, minimum: int) -> int:
    if name not in data:
        raise SeriesFileError(name, "missing")
    v = data[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SeriesFileError(name, f"expected an integer, got {type(v).__name__}")
    if v < minimum:
        raise SeriesFileError(name, f"must be >= {minimum}, got {v}")
    return v


def series_from_dict(data) -> tuple[TruncatedSeries, dict]:
    if not isinstance(data, dict):
        raise SeriesFileError("<root>", "expected a JSON object")
    p = _int_field(data, "p", 2)
    if not is_prime(p):
        raise SeriesFileError("p", f"{p} is not prime")
    N = _int_field(data, "N", 8)
    M = _int_field(data, "M", 1)
    kappa = _int_field(data, "kappa_gamma", 1) if "kappa_gamma" in data else 0
    try:
        ctx = PadicContext(p, N, kappa)
    except ValueError as exc:
        raise SeriesFileError("kappa_gamma", str(exc)) from None
    coeffs = data.get("coefficients")
    if not isinstance(coeffs, list):
        raise SeriesFileError("coefficients", "missing or not a list")
    if len(coeffs) != M:
        raise SeriesFileError("coefficients", f"expected M={M} entries, got {len(coeffs)}")
    values = []
    for i, c in enumerate(coeffs):
        if not isinstance(c, str) or not _DIGITS.match(c):
            raise SeriesFileError(f"coefficients[{i}]", f"not a non-negative base-10 integer string: {c!r}")
        values.append(int(c) % ctx.modulus)
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise SeriesFileError("metadata", "expected an object")
    return TruncatedSeries(ctx, tuple(values), N), meta


def series_to_dict(f: TruncatedSeries, metadata: dict | None = None) -> dict:
    return {
        "p": f.p,
        "N": f.prec,
        "M": f.M,
        "kappa_gamma": f.ctx.kappa_gamma,
        "coefficients": [str(c) for c in f.coeffs],
        "metadata": dict(metadata or {}),
    }


def loads(text: str) -> tuple[TruncatedSeries, dict]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesFileError("<root>", f"invalid JSON: {exc}") from None
    return series_from_dict(data)


def dumps(f: TruncatedSeries, metadata: dict | None = None) -> str:
    return json.dumps(series_to_dict(f, metadata), indent=1) + "\n"


def ingest(path) -> tuple[TruncatedSeries, dict]:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_series(f: TruncatedSeries, path, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps(f, metadata), encoding="utf-8")


def to_jsonable(obj):
    """Convert reports (dataclasses, enums, p-adic values) into plain JSON data."""
    if isinstance(obj, TruncatedSeries):
        return series_to_dict(obj)
    if isinstance(obj, PadicInt):
        return {"residue": str(obj.residue), "precision": obj.k}
    if isinstance(obj, PadicContext):
        return {"p": obj.p, "N": obj.N, "kappa_gamma": obj.kappa_gamma}
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def emit_report(report, path=None) -> str:
    """Serialize a report (or series) to JSON; write it to ``path`` when given."""
    text = json.dumps(to_jsonable(report), indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
