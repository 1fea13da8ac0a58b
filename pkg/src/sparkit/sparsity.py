"""
Sparse representations on finite measure spaces.

Exhaustive minimum-measure solves, the half-spark and level uniqueness
certificates, the uncertainty check, and a decision procedure for whether
level-``r`` uniqueness forces ``spark > 2r`` on a given finite instance.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import ContractViolation, InconsistencyError, PreconditionError
from .exact_linalg import (
    DenseMatrix,
    Vector,
    as_rational,
    integer_columns,
    kernel_basis,
    rank_of_columns,
    solve_on_support,
    vector,
)
from .measure import FiniteMeasureSpace, SupportSet, measure_of, support
from .spark import (
    INFINITE,
    LinearMapOnMeasureSpace,
    SparkResult,
    SparkValue,
    check_desk_scale,
    enumerate_circuits,
    is_infinite,
    subsets_by_weight,
    weighted_spark,
)

HALF_SPARK = "half-spark"
LEVEL_UNIQUENESS = "level-uniqueness"
UNCERTAINTY = "uncertainty"
CONVERSE_PROBE = "converse-probe"


@dataclass(frozen=True)
class SparseSolution:
    coefficients: Vector
    support: SupportSet
    objective: Fraction
    unique: bool
    """No other support of the same measure admits a solution with exactly that support."""
    injective_on_support: bool
    """The columns on ``support`` are independent, so the coefficients are the only ones there."""


@dataclass(frozen=True)
class Certificate:
    kind: str
    spark_value: SparkValue
    quantities: dict = field(default_factory=dict)
    verdict: bool = False
    narrative: str = ""
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)


def _fmt(x) -> str:
    return "Infinite" if is_infinite(x) else str(x)


def _check_len(v: Sequence, n: int, what: str) -> Vector:
    v = vector(v)
    if len(v) != n:
        raise ContractViolation(f"{what} has dimension {len(v)}, expected {n}")
    return v


def l0_solve(m: LinearMapOnMeasureSpace, v: Sequence, *, override: bool = False) -> SparseSolution | None:
    """Minimum-measure representation of ``v``, or ``None`` if ``v`` is outside the range.

    Supports are visited in nondecreasing measure. A support ``S`` counts
    only when the restricted solve returns coefficients whose support is
    exactly ``S``; smaller supports are reached on their own turn. The
    search runs to the end of the winning measure level to settle
    ``unique``.
    """
    a = m.matrix
    v = _check_len(v, a.rows, "target")
    check_desk_scale(a.cols, override)
    best = None
    others = 0
    for w, s in subsets_by_weight(m.domain.weights):
        if best is not None and w > best[0]:
            break
        x = solve_on_support(a, v, s)
        if x is None or support(x) != s:
            continue
        if best is None:
            best = (w, s, x)
        else:
            others += 1
    if best is None:
        return None
    w, s, x = best
    cols = integer_columns(a)
    return SparseSolution(x, s, w, unique=others == 0,
                          injective_on_support=rank_of_columns(cols, s) == len(s))


def certify_half_spark(m: LinearMapOnMeasureSpace, candidate: Sequence,
                       *, spark: SparkResult | None = None, override: bool = False) -> Certificate:
    """Sufficient condition for ``candidate`` to be the unique sparsest
    representation of ``A @ candidate``: its support measure is strictly
    below half the spark. A false verdict proves nothing either way."""
    c = _check_len(candidate, m.n, "candidate")
    sp = spark if spark is not None else weighted_spark(m, override=override)
    mu = measure_of(m.domain, support(c))
    half = sp.value / 2 if not sp.is_infinite else INFINITE
    verdict = mu < half
    narrative = (
        f"support measure {mu} {'<' if verdict else '>='} spark/2 = {_fmt(half)}: "
        + ("candidate is the unique minimum-measure representation of its image"
           if verdict else "no conclusion (sufficient condition not met)")
    )
    return Certificate(HALF_SPARK, sp.value, {"support_measure": mu, "half_spark": half},
                       verdict, narrative)


def uniqueness_level(m: LinearMapOnMeasureSpace, level: Fraction | int | str | None = None,
                     *, spark: SparkResult | None = None, override: bool = False) -> Certificate:
    """Uniqueness threshold: at most one representation of measure ``<= r``
    exists for every target whenever ``r < spark/2``.

    With ``level`` given the verdict is ``spark > 2 * level``; without, it
    is the verdict at level 0. Under counting measure the largest integer
    ``k`` with ``spark > 2k`` is reported as ``k_max``.
    """
    sp = spark if spark is not None else weighted_spark(m, override=override)
    r = Fraction(0) if level is None else as_rational(level)
    if r < 0:
        raise ContractViolation(f"level must be nonnegative, got {r}")
    half = INFINITE if sp.is_infinite else sp.value / 2
    quantities = {"threshold": half, "level_r": r}
    if m.domain.is_counting:
        # spark is an integer here
        quantities["k_max"] = INFINITE if sp.is_infinite else Fraction((int(sp.value) - 1) // 2)
    verdict = sp.value > 2 * r
    if sp.is_infinite:
        narrative = "trivial kernel: every level is certified"
    else:
        narrative = f"uniqueness guaranteed at every level r < {half}; level {r} is " + (
            "certified" if verdict else "not certified")
    return Certificate(LEVEL_UNIQUENESS, sp.value, quantities, verdict, narrative)


def check_uncertainty(m: LinearMapOnMeasureSpace, f: Sequence, g: Sequence,
                      *, spark: SparkResult | None = None, override: bool = False) -> Certificate:
    """Check ``mu(supp f) + mu(supp g) >= spark`` for distinct ``f, g`` with equal images.

    Raises:
        PreconditionError: ``f == g`` ("not distinct") or ``A f != A g``
            ("images differ").
        InconsistencyError: the inequality failed, which cannot happen.
    """
    f = _check_len(f, m.n, "f")
    g = _check_len(g, m.n, "g")
    if f == g:
        raise PreconditionError("not distinct")
    if m.apply(f) != m.apply(g):
        raise PreconditionError("images differ")
    sp = spark if spark is not None else weighted_spark(m, override=override)
    mf = measure_of(m.domain, support(f))
    mg = measure_of(m.domain, support(g))
    total = mf + mg
    verdict = total >= sp.value
    if not verdict:
        raise InconsistencyError(
            f"uncertainty inequality violated: {mf} + {mg} < spark {_fmt(sp.value)}")
    tight = total == sp.value
    narrative = f"{mf} + {mg} = {total} >= spark {_fmt(sp.value)}" + (" (tight)" if tight else "")
    return Certificate(UNCERTAINTY, sp.value, {"measure_f": mf, "measure_g": mg, "sum": total},
                       verdict, narrative, flags={"tight": tight})


def _split(domain: FiniteMeasureSpace, circuit: SupportSet, r: Fraction) -> tuple[SupportSet, SupportSet] | None:
    """A partition of ``circuit`` into two parts of measure ``<= r`` each, if any.

    Parts are tried by increasing size of the first part, then lexicographically.
    """
    total = measure_of(domain, circuit)
    if total > 2 * r:
        return None
    for k in range(len(circuit) + 1):
        for c1 in combinations(circuit, k):
            w1 = measure_of(domain, c1)
            if w1 <= r and total - w1 <= r:
                c2 = tuple(i for i in circuit if i not in c1)
                return c1, c2
    return None


def _circuit_vector(a: DenseMatrix, circuit: SupportSet) -> Vector:
    local = kernel_basis(a.select_columns(circuit))[0]
    full = [Fraction(0)] * a.cols
    for j, x in zip(circuit, local):
        full[j] = x
    return tuple(full)


def uniqueness_fails(m: LinearMapOnMeasureSpace, r, *, override: bool = False) -> tuple[Vector, Vector] | None:
    """Two distinct vectors of support measure ``<= r`` with the same image, if any exist.

    Such a pair exists iff some circuit splits into two parts of measure
    ``<= r``; the pair is then ``(h on C1, -h on C2)`` for the circuit's
    kernel vector ``h``.
    """
    r = as_rational(r)
    for c in enumerate_circuits(m, 2 * r, override=override):
        parts = _split(m.domain, c, r)
        if parts is None:
            continue
        h = _circuit_vector(m.matrix, c)
        c1 = set(parts[0])
        f = tuple(x if i in c1 else Fraction(0) for i, x in enumerate(h))
        g = tuple(-x if (i not in c1 and x != 0) else Fraction(0) for i, x in enumerate(h))
        return f, g
    return None


def probe_converse(m: LinearMapOnMeasureSpace, r, *, spark: SparkResult | None = None,
                   override: bool = False) -> Certificate:
    """Decide, on this instance, whether level-``r`` uniqueness fails, and
    flag a converse violation when ``spark <= 2r`` although uniqueness holds.

    The verdict is true when the instance is consistent with the converse,
    i.e. ``spark > 2r`` or uniqueness fails.
    """
    r = as_rational(r)
    if r < 0:
        raise ContractViolation(f"level must be nonnegative, got {r}")
    sp = spark if spark is not None else weighted_spark(m, override=override)
    pair = uniqueness_fails(m, r, override=override)
    spark_at_most_2r = (not sp.is_infinite) and sp.value <= 2 * r
    fails = pair is not None
    violation = spark_at_most_2r and not fails
    if fails:
        f, g = pair
        if f == g or m.apply(f) != m.apply(g):
            raise InconsistencyError("uniqueness-failure witness pair does not verify")
        if measure_of(m.domain, support(f)) > r or measure_of(m.domain, support(g)) > r:
            raise InconsistencyError("uniqueness-failure witness exceeds level")
    if sp.is_infinite:
        narrative = "trivial kernel: uniqueness holds at every level; converse vacuous"
    elif violation:
        narrative = (f"CONVERSE VIOLATION: spark {sp.value} <= 2r = {2 * r} yet at most one "
                     f"representation of measure <= {r} exists for every target")
    elif fails:
        narrative = f"uniqueness fails at level {r} (witness pair included); spark {sp.value} <= 2r = {2 * r}"
    else:
        narrative = f"uniqueness holds at level {r}; spark {sp.value} > 2r = {2 * r}"
    return Certificate(
        CONVERSE_PROBE, sp.value, {"level_r": r, "two_r": 2 * r}, not violation, narrative,
        flags={"spark_at_most_2r": spark_at_most_2r, "uniqueness_fails": fails,
               "converse_violation": violation},
        witnesses={"f": pair[0], "g": pair[1]} if fails else {},
    )


def boundary_level(sp: SparkResult, domain: FiniteMeasureSpace):
    """Smallest admissible level ``r`` with ``spark <= 2r``.

    Counting measure uses integer levels, matching the classical
    ``||c||_0 <= k`` statement; elsewhere levels are rational and the
    boundary is ``spark / 2``. ``None`` for infinite spark.
    """
    if sp.is_infinite:
        return None
    if domain.is_counting:
        return Fraction(math.ceil(sp.value / 2))
    return sp.value / 2


# --- random converse search -------------------------------------------------

PROFILES = ("counting", "positive", "zero-atoms", "planted", "identity")
DEFAULT_PROFILES = ("counting", "positive", "zero-atoms", "planted")


@dataclass(frozen=True)
class GeneratorSpec:
    """How random instances are drawn. Trial ``i`` uses ``profiles[i % len(profiles)]``."""

    profiles: tuple[str, ...] = DEFAULT_PROFILES
    max_rows: int = 3
    max_cols: int = 6
    entry_bound: int = 2

    def __post_init__(self):
        if not self.profiles:
            raise ContractViolation("at least one profile is required")
        for p in self.profiles:
            if p not in PROFILES:
                raise ContractViolation(f"unknown profile {p!r}; choose from {', '.join(PROFILES)}")
        if not 1 <= self.max_rows <= self.max_cols:
            raise ContractViolation("need 1 <= max_rows <= max_cols")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    profile: str
    instance: LinearMapOnMeasureSpace
    spark_value: SparkValue
    level: Fraction | None
    uniqueness_fails: bool
    violation: bool


@dataclass(frozen=True)
class ConverseSearchReport:
    seed: int
    trials: tuple[TrialRecord, ...]

    @property
    def violations(self) -> int:
        return sum(t.violation for t in self.trials)

    def table(self) -> list[dict]:
        """Per-profile counts, in first-seen profile order."""
        seen: dict[str, Counter] = {}
        for t in self.trials:
            c = seen.setdefault(t.profile, Counter())
            c["trials"] += 1
            c["vacuous"] += t.level is None
            c["violations"] += t.violation
        return [{"profile": p, "trials": c["trials"], "vacuous": c["vacuous"],
                 "violations": c["violations"],
                 "frequency": Fraction(c["violations"], c["trials"])} for p, c in seen.items()]


def _random_entry(rng: random.Random, bound: int) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def random_instance(rng: random.Random, profile: str, spec: GeneratorSpec) -> LinearMapOnMeasureSpace:
    if profile == "identity":
        n = rng.randint(1, spec.max_rows)
        a = DenseMatrix.from_rows([[int(i == j) for j in range(n)] for i in range(n)])
        return LinearMapOnMeasureSpace.counting(a)
    if profile == "planted":
        # columns {e1, c*e1} with weights (3, 1): spark 4, yet uniqueness holds at r = 2
        scale = rng.choice((2, 3, -1, Fraction(1, 2)))
        a = DenseMatrix.from_columns([[1], [scale]])
        return LinearMapOnMeasureSpace(a, FiniteMeasureSpace((Fraction(3), Fraction(1))))
    rows = rng.randint(1, spec.max_rows)
    cols = rng.randint(rows, spec.max_cols)
    a = DenseMatrix.from_rows([[_random_entry(rng, spec.entry_bound) for _ in range(cols)] for _ in range(rows)])
    if profile == "counting":
        return LinearMapOnMeasureSpace.counting(a)
    if profile == "positive":
        weights = [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(cols)]
    else:
        weights = [Fraction(0) if rng.random() < 0.3 else Fraction(rng.randint(1, 6), rng.randint(1, 3))
                   for _ in range(cols)]
    return LinearMapOnMeasureSpace(a, FiniteMeasureSpace(tuple(weights)))


def search_converse_violations(spec: GeneratorSpec, trials: int, seed: int = 0) -> ConverseSearchReport:
    """Probe random instances at their boundary level (see :func:`boundary_level`).

    Deterministic for a fixed ``seed``: every trial draws from its own
    generator seeded by ``(seed, index)``.
    """
    if trials < 1:
        raise ContractViolation(f"trials must be >= 1, got {trials}")
    records = []
    for i in range(trials):
        profile = spec.profiles[i % len(spec.profiles)]
        rng = random.Random(f"{seed}:{i}")
        inst = random_instance(rng, profile, spec)
        sp = weighted_spark(inst)
        level = boundary_level(sp, inst.domain)
        if level is None:
            records.append(TrialRecord(i, profile, inst, sp.value, None, False, False))
            continue
        cert = probe_converse(inst, level, spark=sp)
        records.append(TrialRecord(i, profile, inst, sp.value, level,
                                   cert.flags["uniqueness_fails"], cert.flags["converse_violation"]))
    return ConverseSearchReport(seed, tuple(records))
