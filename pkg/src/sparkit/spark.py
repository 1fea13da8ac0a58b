"""
Spark engines.

Three routes to the same quantity:

* :func:`spark_combinatorial` scans column subsets by size for the first
  linearly dependent one.
* :func:`spark_kernel` starts from a kernel basis and asks, support by
  support, whether some nonzero kernel vector lives inside it.
* :func:`weighted_spark` runs a best-first search over supports ordered by
  measure, for a linear map whose domain is a finite measure space.

The counting engines agree by construction of the two formulas for spark;
the test suite checks that they do.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import ContractViolation, ResourceGuardError
from .exact_linalg import (
    DenseMatrix,
    Vector,
    integer_columns,
    kernel_basis,
    primitive,
    rank,
    rank_of_columns,
)
from .frames import Frame
from .measure import FiniteMeasureSpace, SupportSet, counting_measure, measure_of, support

INFINITE = math.inf
"""Spark of an injective map. Compares above every rational."""

DESK_SCALE_LIMIT = 24

SparkValue = Union[Fraction, float]


def is_infinite(value) -> bool:
    return isinstance(value, float) and math.isinf(value)


@dataclass(frozen=True)
class LinearMapOnMeasureSpace:
    """A linear map ``A`` whose domain is the functions on a finite measure space."""

    matrix: DenseMatrix
    domain: FiniteMeasureSpace

    def __post_init__(self):
        if self.matrix.cols != self.domain.size:
            raise ContractViolation(
                f"matrix has {self.matrix.cols} columns but the measure space has {self.domain.size} atoms"
            )

    @classmethod
    def counting(cls, matrix: DenseMatrix) -> LinearMapOnMeasureSpace:
        return cls(matrix, counting_measure(matrix.cols))

    @property
    def n(self) -> int:
        return self.matrix.cols

    def apply(self, f: Sequence) -> Vector:
        return self.matrix.matvec(f)


@dataclass(frozen=True)
class SparkResult:
    value: SparkValue
    witness: Vector | None = None
    witness_support: SupportSet | None = None

    @property
    def is_infinite(self) -> bool:
        return is_infinite(self.value)


def _as_matrix(obj) -> DenseMatrix:
    if isinstance(obj, Frame):
        return obj.synthesis
    if isinstance(obj, LinearMapOnMeasureSpace):
        return obj.matrix
    if isinstance(obj, DenseMatrix):
        return obj
    raise ContractViolation(f"expected a Frame or DenseMatrix, got {type(obj).__name__}")


def check_desk_scale(n: int, override: bool = False) -> None:
    if n > DESK_SCALE_LIMIT and not override:
        raise ResourceGuardError(
            f"{n} columns exceeds the desk-scale limit of {DESK_SCALE_LIMIT}; "
            "exhaustive search is exponential (pass override to proceed)"
        )


def _witness_on(m: DenseMatrix, s: Sequence[int]) -> Vector:
    """A nonzero kernel vector of ``m`` supported inside ``s``."""
    local = kernel_basis(m.select_columns(s))[0]
    full = [Fraction(0)] * m.cols
    for j, x in zip(s, local):
        full[j] = x
    return primitive(full)


def _result(m: DenseMatrix, s: Sequence[int], domain: FiniteMeasureSpace) -> SparkResult:
    w = _witness_on(m, s)
    supp = support(w)
    return SparkResult(measure_of(domain, supp), w, supp)


def spark_combinatorial(fr, *, prune_coherence: bool = False, override: bool = False) -> SparkResult:
    """Smallest number of linearly dependent columns.

    Accepts a :class:`Frame` or a raw :class:`DenseMatrix`. With
    ``prune_coherence`` the cardinalities ruled out by the coherence bound
    (minus one level of safety margin) are skipped; every reported answer
    is still decided by exact rank.
    """
    m = _as_matrix(fr)
    n = m.cols
    check_desk_scale(n, override)
    cols = integer_columns(m)
    full_rank = rank(m)
    if full_rank == n:
        return SparkResult(INFINITE)
    start = 1
    if prune_coherence and all(any(c) for c in cols):
        floor = coherence_floor(m)
        if not math.isinf(floor):
            start = max(1, math.ceil(floor) - 1)
    # any full_rank + 1 columns are dependent, so the scan stops by then
    for k in range(start, full_rank + 2):
        for s in combinations(range(n), k):
            if rank_of_columns(cols, s) < k:
                return _result(m, s, counting_measure(n))
    raise AssertionError("unreachable: rank + 1 columns are always dependent")


def spark_kernel(fr, *, override: bool = False) -> SparkResult:
    """Minimum number of nonzeros over nonzero kernel vectors.

    Let ``K`` be an ``n x q`` kernel basis matrix. A nonzero kernel vector
    confined to support ``S`` exists iff the rows of ``K`` outside ``S``
    have rank below ``q``.
    """
    m = _as_matrix(fr)
    n = m.cols
    check_desk_scale(n, override)
    basis = kernel_basis(m)
    if not basis:
        return SparkResult(INFINITE)
    q = len(basis)
    k_rows = DenseMatrix.from_columns(basis)  # n x q
    k_int = integer_columns(k_rows.transpose())  # entry i: row i of K, integer-scaled
    for k in range(1, n + 1):
        for s in combinations(range(n), k):
            outside = [i for i in range(n) if i not in s]
            if rank_of_columns(k_int, outside) < q:
                if outside:
                    c = kernel_basis(DenseMatrix.from_columns([k_rows.row(i) for i in outside]).transpose())[0]
                else:
                    c = (Fraction(1),) + (Fraction(0),) * (q - 1)
                d = primitive(k_rows.matvec(c))
                supp = support(d)
                return SparkResult(Fraction(len(supp)), d, supp)
    raise AssertionError("unreachable: the full support always carries a kernel vector")


def subsets_by_weight(weights: Sequence[Fraction]) -> Iterator[tuple[Fraction, SupportSet]]:
    """Yield every subset of atoms exactly once, in nondecreasing measure.

    Atoms are ranked by ``(weight, index)``; a subset is a strictly
    increasing list of ranks and has two children: extend by the next rank,
    or bump its last rank by one. Both children weigh at least as much as
    the parent, so a heap keyed by ``(measure, sorted indices)`` pops in
    measure order with ties broken lexicographically among queued sets.
    """
    n = len(weights)
    order = sorted(range(n), key=lambda i: (weights[i], i))
    heap: list[tuple[Fraction, SupportSet, tuple[int, ...]]] = [(Fraction(0), (), ())]
    while heap:
        w, idx, ranks = heapq.heappop(heap)
        yield w, idx
        last = ranks[-1] if ranks else -1
        if last + 1 < n:
            nxt = order[last + 1]
            heapq.heappush(heap, (w + weights[nxt], tuple(sorted(idx + (nxt,))), ranks + (last + 1,)))
            if ranks:
                cur = order[last]
                bumped = tuple(sorted([i for i in idx if i != cur] + [nxt]))
                heapq.heappush(heap, (w - weights[cur] + weights[nxt], bumped, ranks[:-1] + (last + 1,)))


def weighted_spark(m: LinearMapOnMeasureSpace, *, override: bool = False) -> SparkResult:
    """Infimum of the measure of supports of nonzero kernel elements.

    Among all minimum-measure dependent supports the lexicographically
    smallest index sequence is returned as the witness support's parent.
    Zero-weight atoms are fine: the value may be 0 with a nonzero witness.
    """
    a = m.matrix
    n = a.cols
    check_desk_scale(n, override)
    if rank(a) == n:
        return SparkResult(INFINITE)
    cols = integer_columns(a)
    best_w = None
    hits: list[SupportSet] = []
    for w, s in subsets_by_weight(m.domain.weights):
        if best_w is not None and w > best_w:
            break
        if s and rank_of_columns(cols, s) < len(s):
            best_w = w
            hits.append(s)
    return _result(a, min(hits), m.domain)


def enumerate_circuits(m: LinearMapOnMeasureSpace, max_weight: SparkValue = INFINITE,
                       *, override: bool = False) -> list[SupportSet]:
    """All inclusion-minimal dependent column sets of measure at most ``max_weight``.

    Ordered by cardinality, then lexicographically.
    """
    a = m.matrix
    n = a.cols
    check_desk_scale(n, override)
    cols = integer_columns(a)
    r = rank(a)
    out = []
    for k in range(1, min(n, r + 1) + 1):
        for s in combinations(range(n), k):
            if measure_of(m.domain, s) > max_weight:
                continue
            if rank_of_columns(cols, s) == k:
                continue
            if all(rank_of_columns(cols, s[:i] + s[i + 1:]) == k - 1 for i in range(k)):
                out.append(s)
    return out


def coherence(fr) -> float:
    """Largest absolute cosine between two distinct columns (float)."""
    m = _as_matrix(fr)
    a = np.array([[float(x) for x in row] for row in m.to_rows()], dtype=float)
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        raise ContractViolation("coherence is undefined with a zero column")
    a = a / norms
    g = np.abs(a.T @ a)
    np.fill_diagonal(g, 0.0)
    return float(g.max()) if g.size > 1 else 0.0


def coherence_floor(fr) -> float:
    """Lower bound ``1 + 1/coherence`` on the spark; ``inf`` for orthogonal columns.

    Floating point. Only ever used to skip cardinalities.
    """
    mu = coherence(fr)
    if mu == 0.0:
        return math.inf
    return 1.0 + 1.0 / mu
