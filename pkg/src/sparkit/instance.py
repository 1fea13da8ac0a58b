"""
Instance files.

An instance is a JSON object::

    {"rows": 2, "cols": 3,
     "entries": ["1", "0", "1", "0", "1", "1"],
     "measure": "counting"}

``entries`` is row-major. ``measure`` is ``"counting"``, a list of weight
strings, or a density ``{"a": "0", "b": "1", "atoms": 4, "coeffs": ["0", "2"]}``
(``coeffs[k]`` multiplies ``x**k``). Every rational is a string matching
``-?\\d+(/\\d+)?``; floats are refused.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .exact_linalg import DenseMatrix
from .measure import FiniteMeasureSpace, counting_measure
from .spark import LinearMapOnMeasureSpace

RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


class InstanceError(ValueError):
    """Malformed instance input. ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def parse_rational(s: Any, where: str) -> Fraction:
    if not isinstance(s, str) or not RATIONAL_RE.fullmatch(s):
        raise InstanceError(f"{where}: expected a rational string like \"-3/4\", got {s!r}")
    value = s.split("/")
    if len(value) == 2 and int(value[1]) == 0:
        raise InstanceError(f"{where}: zero denominator in {s!r}")
    return Fraction(s)


def parse_rational_list(text: str, where: str) -> tuple[Fraction, ...]:
    """Comma-separated rationals, as given on the command line."""
    parts = [p.strip() for p in text.split(",")]
    return tuple(parse_rational(p, f"{where}[{i}]") for i, p in enumerate(parts))


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class DensitySpec:
    """Polynomial density ``sum_k coeffs[k] * x**k`` on ``[a, b]``, cut into ``atoms`` cells."""

    a: Fraction
    b: Fraction
    atoms: int
    coeffs: tuple[Fraction, ...]

    def density(self, x: Fraction) -> Fraction:
        return sum((c * x ** k for k, c in enumerate(self.coeffs)), Fraction(0))

    def antiderivative(self, x: Fraction) -> Fraction:
        return sum((c * x ** (k + 1) / (k + 1) for k, c in enumerate(self.coeffs)), Fraction(0))


def discretize_density(spec: DensitySpec) -> FiniteMeasureSpace:
    """One atom per equal subinterval, weighted by the exact integral of the density over it.

    The density is sampled at every cell's endpoints and midpoint; any
    negative sample rejects the spec.
    """
    if not spec.a < spec.b:
        raise InstanceError(f"density interval needs a < b, got [{spec.a}, {spec.b}]")
    if spec.atoms < 1:
        raise InstanceError(f"density needs atoms >= 1, got {spec.atoms}")
    if not spec.coeffs:
        raise InstanceError("density needs at least one coefficient")
    step = (spec.b - spec.a) / spec.atoms
    weights = []
    for i in range(spec.atoms):
        lo, hi = spec.a + i * step, spec.a + (i + 1) * step
        for x in (lo, (lo + hi) / 2, hi):
            if spec.density(x) < 0:
                raise InstanceError(f"density is negative at x = {x}")
        weights.append(spec.antiderivative(hi) - spec.antiderivative(lo))
    return FiniteMeasureSpace(tuple(weights))


def _parse_measure(obj: Any, cols: int) -> FiniteMeasureSpace:
    if obj == "counting":
        return counting_measure(cols)
    if isinstance(obj, list):
        if len(obj) != cols:
            raise InstanceError(f"measure: {len(obj)} weights for {cols} columns")
        weights = tuple(parse_rational(w, f"measure[{i}]") for i, w in enumerate(obj))
        for i, w in enumerate(weights):
            if w < 0:
                raise InstanceError(f"measure[{i}]: negative weight {w}")
        return FiniteMeasureSpace(weights)
    if isinstance(obj, dict):
        missing = {"a", "b", "atoms", "coeffs"} - obj.keys()
        if missing:
            raise InstanceError(f"measure: density spec missing {sorted(missing)}")
        atoms = obj["atoms"]
        if not isinstance(atoms, int) or isinstance(atoms, bool):
            raise InstanceError("measure.atoms: expected an integer")
        if not isinstance(obj["coeffs"], list):
            raise InstanceError("measure.coeffs: expected a list")
        spec = DensitySpec(parse_rational(obj["a"], "measure.a"), parse_rational(obj["b"], "measure.b"), atoms,
                           tuple(parse_rational(c, f"measure.coeffs[{i}]") for i, c in enumerate(obj["coeffs"])))
        sp = discretize_density(spec)
        if sp.size != cols:
            raise InstanceError(f"measure: density has {sp.size} atoms for {cols} columns")
        return sp
    raise InstanceError("measure: expected \"counting\", a weight list, or a density spec")


def instance_from_dict(obj: Any) -> LinearMapOnMeasureSpace:
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    for key in ("rows", "cols", "entries", "measure"):
        if key not in obj:
            raise InstanceError(f"missing field {key!r}")
    rows, cols = obj["rows"], obj["cols"]
    for key, val in (("rows", rows), ("cols", cols)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise InstanceError(f"{key}: expected a positive integer, got {val!r}")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise InstanceError(f"entries: expected a list of {rows * cols} rational strings")
    values = tuple(parse_rational(e, f"entries[{i}]") for i, e in enumerate(entries))
    return LinearMapOnMeasureSpace(DenseMatrix(rows, cols, values), _parse_measure(obj["measure"], cols))


def parse_instance(text: str) -> LinearMapOnMeasureSpace:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return instance_from_dict(obj)


def load_instance(path: str) -> LinearMapOnMeasureSpace:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def instance_to_dict(m: LinearMapOnMeasureSpace) -> dict:
    """Canonical form. Counting measure is written as the keyword; any
    other measure (density-derived included) as its weight list."""
    measure: Any = "counting" if m.domain.is_counting else [format_rational(w) for w in m.domain.weights]
    return {
        "rows": m.matrix.rows,
        "cols": m.matrix.cols,
        "entries": [format_rational(x) for x in m.matrix.entries],
        "measure": measure,
    }


def dump_instance(m: LinearMapOnMeasureSpace) -> str:
    return json.dumps(instance_to_dict(m), sort_keys=True, indent=2) + "\n"


def instance_digest(m: LinearMapOnMeasureSpace) -> str:
    canon = json.dumps(instance_to_dict(m), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def vector_to_strings(v: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in v]
