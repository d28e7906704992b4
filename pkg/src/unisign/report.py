"""Run reports and their JSON / CSV serialization.

Floats are written with 17 significant digits, enough to round-trip every
double exactly, so ``from_json(to_json(r)) == r``.
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

__all__ = ["RunReport", "ERROR_FIELDS", "dumps", "reports_to_csv", "reports_from_csv"]

ERROR_FIELDS = ("factorization", "involution", "hermitian_defect", "unitarity", "square",
                "half_plane")


@dataclass
class RunReport:
    """Outcome of one experiment.

    ``eigenvalues`` holds ``[re, im]`` pairs for eigensolver runs.  Metrics
    that do not apply (eigen-residuals of a sign run, or anything
    after a failure) are ``None``.  ``error`` holds the failure message of an
    algorithm that broke down; such runs are results, not tool errors.
    """

    command: str
    matrix_name: str
    m: int
    seed: int
    algorithm: str
    n: int
    delta: float
    perturb: bool = False
    iterations: int | None = None
    factorization: float | None = None
    involution: float | None = None
    hermitian_defect: float | None = None
    unitarity: float | None = None
    square: float | None = None
    half_plane: float | None = None
    raw_hermitian_defect: float | None = None
    eig_residual: float | None = None
    eig_orthogonality: float | None = None
    eigenvalues: list | None = None
    wall_time_ms: float = 0.0
    warnings: list = field(default_factory=list)
    error: str | None = None

    def to_json(self):
        return dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def max_error(self):
        vals = [getattr(self, f) for f in ERROR_FIELDS if getattr(self, f) is not None]
        return max(vals) if vals else None


def _render(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return "NaN"
        if math.isinf(obj):
            return "Infinity" if obj > 0 else "-Infinity"
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _render(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with floats at 17 significant digits."""
    return _render(obj, indent, 0)


_COLUMNS = [f.name for f in fields(RunReport)]
_TYPES = {"m": int, "seed": int, "n": int, "iterations": int, "delta": float,
          "wall_time_ms": float, "perturb": lambda s: s == "true"}


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, list):
        if value and isinstance(value[0], list):
            return ";".join(f"{format(re, '.17g')}:{format(im, '.17g')}" for re, im in value)
        # free text may contain any separator
        return json.dumps(value)
    return str(value)


def reports_to_csv(reports):
    buf = io.StringIO()
    # CRLF rows (RFC 4180) make the writer quote any field holding \r or \n
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(_COLUMNS)
    for r in reports:
        d = asdict(r)
        w.writerow([_cell(d[c]) for c in _COLUMNS])
    return buf.getvalue()


def _parse(col, text):
    if col == "warnings":
        return json.loads(text) if text else []
    if col == "eigenvalues":
        if not text:
            return None
        return [[float(p) for p in pair.split(":")] for pair in text.split(";")]
    if text == "":
        return None if col not in ("command", "matrix_name", "algorithm") else ""
    if col in _TYPES:
        return _TYPES[col](text)
    if col in ERROR_FIELDS or col in ("raw_hermitian_defect", "eig_residual", "eig_orthogonality"):
        return float(text)
    return text


def reports_from_csv(text):
    rows = list(csv.DictReader(io.StringIO(text, newline="")))
    return [RunReport(**{c: _parse(c, row[c]) for c in _COLUMNS}) for row in rows]
