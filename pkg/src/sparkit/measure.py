"""Finite measure spaces: atoms ``0..size-1`` carrying nonnegative rational weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContractViolation
from .exact_linalg import as_rational

SupportSet = tuple[int, ...]


@dataclass(frozen=True)
class FiniteMeasureSpace:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_rational(w) for w in self.weights)
        if not weights:
            raise ContractViolation("a measure space needs at least one atom")
        for i, w in enumerate(weights):
            if w < 0:
                raise ContractViolation(f"atom {i} has negative weight {w}")
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def is_counting(self) -> bool:
        return all(w == 1 for w in self.weights)

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def counting_measure(n: int) -> FiniteMeasureSpace:
    if n < 1:
        raise ContractViolation(f"counting measure needs n >= 1, got {n}")
    return FiniteMeasureSpace((Fraction(1),) * n)


def support(f: Sequence[Fraction]) -> SupportSet:
    """Indices of the exactly-nonzero entries of ``f``."""
    return tuple(i for i, x in enumerate(f) if x != 0)


def support_set(indices: Iterable[int], size: int) -> SupportSet:
    """Validate and canonicalize an index collection as a :data:`SupportSet`."""
    s = tuple(sorted(set(indices)))
    for i in s:
        if not 0 <= i < size:
            raise ContractViolation(f"atom index {i} out of range [0, {size})")
    return s


def measure_of(sp: FiniteMeasureSpace, s: Iterable[int]) -> Fraction:
    total = Fraction(0)
    for i in s:
        if not 0 <= i < sp.size:
            raise ContractViolation(f"atom index {i} out of range [0, {sp.size})")
        total += sp.weights[i]
    return total
