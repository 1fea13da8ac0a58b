"""
Exact dense linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; vectors are plain tuples of
fractions.  Rank uses fraction-free (Bareiss) elimination on an integer
copy of the matrix, kernels and restricted solves use reduced row echelon
form over ``Fraction``.  Nothing here has a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ContractViolation

Rational = Fraction
Vector = tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and rational strings to ``Fraction``.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(x, bool):
        raise ContractViolation("bool is not a rational scalar")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ContractViolation(f"not a rational: {x!r}") from exc
    raise ContractViolation(f"cannot use {type(x).__name__} as an exact scalar")


def vector(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ContractViolation(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive(v: Sequence[Fraction]) -> Vector:
    """Rescale a nonzero vector to coprime integers with a positive
    leading entry. The zero vector is returned unchanged."""
    nz = [x for x in v if x != 0]
    if not nz:
        return tuple(Fraction(x) for x in v)
    den = lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    if nz[0] < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major matrix of exact rationals.

    Column ``j`` of a synthesis matrix is the frame vector ``tau_j``.
    """

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ContractViolation(f"matrix shape must be positive, got {self.rows}x{self.cols}")
        entries = tuple(as_rational(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ContractViolation(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> DenseMatrix:
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ContractViolation("rows must be nonempty and of equal length")
        return cls(len(rows), len(rows[0]), tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> DenseMatrix:
        columns = [list(c) for c in columns]
        if not columns or any(len(c) != len(columns[0]) for c in columns):
            raise ContractViolation("columns must be nonempty and of equal length")
        return cls.from_rows(list(zip(*columns)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> DenseMatrix:
        return DenseMatrix.from_rows(self.columns())

    def select_columns(self, indices: Sequence[int]) -> DenseMatrix:
        _check_indices(indices, self.cols)
        return DenseMatrix.from_columns([self.column(j) for j in indices])

    def matvec(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ContractViolation(f"vector has dimension {len(v)}, matrix has {self.cols} columns")
        v = vector(v)
        return tuple(dot(self.row(i), v) for i in range(self.rows))


def _check_indices(indices: Sequence[int], bound: int) -> None:
    for j in indices:
        if not 0 <= j < bound:
            raise ContractViolation(f"index {j} out of range [0, {bound})")


def integer_columns(m: DenseMatrix) -> list[list[int]]:
    """Columns of ``m`` scaled by their denominator lcm to integers.

    Column scaling by a nonzero factor preserves the rank of every column
    subset, so the spark engines work on this integer copy.
    """
    out = []
    for col in m.columns():
        den = lcm(*(x.denominator for x in col))
        out.append([int(x * den) for x in col])
    return out


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination. Mutates ``rows``."""
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            a = ri[c]
            for j in range(c + 1, ncols):
                ri[j] = (p * ri[j] - a * pr[j]) // prev
            ri[c] = 0
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rank_of_columns(int_cols: Sequence[Sequence[int]], indices: Sequence[int]) -> int:
    """Rank of the integer column subset ``indices`` (as produced by
    :func:`integer_columns`)."""
    if not indices:
        return 0
    nrows = len(int_cols[indices[0]])
    # transpose: rank(M) = rank(M^T); fewer rows than columns keeps Bareiss short
    if len(indices) <= nrows:
        mat = [list(int_cols[j]) for j in indices]
    else:
        mat = [[int_cols[j][i] for j in indices] for i in range(nrows)]
    return bareiss_rank(mat)


def rank(m: DenseMatrix) -> int:
    """Dimension of the column span of ``m``."""
    rows = []
    for r in m.to_rows():
        den = lcm(*(x.denominator for x in r))
        rows.append([int(x * den) for x in r])
    return bareiss_rank(rows)


def rref(rows: list[list[Fraction]], pivot_cols: int | None = None) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form.

    Only the first ``pivot_cols`` columns are eligible as pivots (an
    augmented right-hand side sits after them). Returns the pivot columns.
    """
    if not rows:
        return []
    nrows, ncols = len(rows), len(rows[0])
    if pivot_cols is None:
        pivot_cols = ncols
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                a = rows[i][c]
                rows[i] = [x - a * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def kernel_basis(m: DenseMatrix) -> list[Vector]:
    """Basis of the null space of ``m``.

    One vector per free column of the echelon form, rescaled to primitive
    integer entries. Empty iff ``m`` is injective.
    """
    rows = m.to_rows()
    pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(primitive(v))
    return basis


def solve_on_support(m: DenseMatrix, v: Sequence[Fraction], support: Sequence[int]) -> Vector | None:
    """Solve ``m x = v`` with ``x`` vanishing outside ``support``.

    Returns ``None`` when the restricted system is inconsistent. Free
    variables of an underdetermined restricted system are set to zero.
    """
    if len(v) != m.rows:
        raise ContractViolation(f"right-hand side has dimension {len(v)}, matrix has {m.rows} rows")
    _check_indices(support, m.cols)
    v = vector(v)
    support = list(support)
    if not support:
        return zeros(m.cols) if all(x == 0 for x in v) else None
    k = len(support)
    rows = [[m[i, j] for j in support] + [v[i]] for i in range(m.rows)]
    pivots = rref(rows, pivot_cols=k)
    if any(rows[i][k] != 0 for i in range(len(pivots), m.rows)):
        return None
    x = [Fraction(0)] * m.cols
    for i, pc in enumerate(pivots):
        x[support[pc]] = rows[i][k]
    return tuple(x)
