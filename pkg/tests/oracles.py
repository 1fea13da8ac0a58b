"""Independent brute-force oracles. They share no code path with sparkit's
engines beyond the DenseMatrix container: rank and nullspaces come from
sympy, searches enumerate every subset directly."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import sympy

from sparkit import DenseMatrix, FiniteMeasureSpace, LinearMapOnMeasureSpace


def to_sympy(m: DenseMatrix, cols=None) -> sympy.Matrix:
    cols = range(m.cols) if cols is None else cols
    return sympy.Matrix([[sympy.Rational(m[i, j].numerator, m[i, j].denominator) for j in cols]
                         for i in range(m.rows)])


def sym_rank(m: DenseMatrix, cols=None) -> int:
    cols = list(range(m.cols) if cols is None else cols)
    if not cols:
        return 0
    return to_sympy(m, cols).rank()


def subsets(n):
    for k in range(n + 1):
        yield from combinations(range(n), k)


def brute_spark(m: DenseMatrix, weights=None):
    """min measure over supports S whose column submatrix has a nontrivial
    sympy nullspace; None when no such S exists."""
    weights = weights or [Fraction(1)] * m.cols
    best = None
    for s in subsets(m.cols):
        if not s:
            continue
        if to_sympy(m, s).nullspace():
            w = sum((weights[i] for i in s), Fraction(0))
            if best is None or w < best:
                best = w
    return best


def consistent(m: DenseMatrix, v, s) -> bool:
    aug = to_sympy(m, s).row_join(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in v])) \
        if s else sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in v])
    base = sym_rank(m, s)
    return aug.rank() == base


def brute_l0(m: DenseMatrix, v, weights):
    """min measure of a support S on which m x = v is solvable (x may vanish inside S)."""
    best = None
    for s in subsets(m.cols):
        if s:
            ok = consistent(m, v, s)
        else:
            ok = all(x == 0 for x in v)
        if ok:
            w = sum((weights[i] for i in s), Fraction(0))
            if best is None or w < best:
                best = w
    return best


def brute_uniqueness_fails(m: LinearMapOnMeasureSpace, r) -> bool:
    """Scan ALL pairs of supports (S, T) with measure <= r: uniqueness fails
    iff the columns on S and T admit a nonzero kernel vector of the
    concatenated block [A_S | -A_T], i.e. two distinct vectors supported in
    S and T with the same image."""
    w = m.domain.weights
    small = [s for s in subsets(m.n) if sum((w[i] for i in s), Fraction(0)) <= r]
    for s in small:
        for t in small:
            idx = list(s) + list(t)
            if not idx:
                continue
            block = to_sympy(m.matrix, s).row_join(-to_sympy(m.matrix, t)) if s and t else (
                to_sympy(m.matrix, s) if s else -to_sympy(m.matrix, t))
            for ns in block.nullspace():
                f = [0] * m.n
                g = [0] * m.n
                for pos, j in enumerate(s):
                    f[j] += ns[pos]
                for pos, j in enumerate(t):
                    g[j] += ns[len(s) + pos]
                if f != g:
                    return True
    return False


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 2, fractions: bool = True) -> DenseMatrix:
    dens = (1, 1, 2, 3) if fractions else (1,)
    return DenseMatrix.from_rows([[Fraction(rng.randint(-bound, bound), rng.choice(dens)) for _ in range(cols)]
                                  for _ in range(rows)])


def random_frame_matrix(rng: random.Random, max_dim=5, max_n=10, bound=2) -> DenseMatrix:
    """Random spanning matrix without zero columns, biased toward small sparks
    by occasionally duplicating or scaling columns."""
    while True:
        dim = rng.randint(1, max_dim)
        n = rng.randint(dim, max_n)
        cols = []
        for _ in range(n):
            if cols and rng.random() < 0.15:
                c = rng.choice(cols)
                k = Fraction(rng.choice((1, -1, 2, -3)), rng.choice((1, 2)))
                cols.append([k * x for x in c])
            else:
                cols.append([Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2))) for _ in range(dim)])
        if any(all(x == 0 for x in c) for c in cols):
            continue
        m = DenseMatrix.from_columns(cols)
        if sym_rank(m) == dim:
            return m


def random_weights(rng: random.Random, n: int, zero_prob: float = 0.0):
    return FiniteMeasureSpace(tuple(
        Fraction(0) if rng.random() < zero_prob else Fraction(rng.randint(1, 6), rng.randint(1, 4))
        for _ in range(n)))


def qq_columns(m: DenseMatrix):
    from sympy import QQ
    return [[QQ(x.numerator, x.denominator) for x in c] for c in m.columns()]


def qq_nullity(cols, rows: int, s) -> int:
    """Nullity of the column subset ``s`` via sympy's DomainMatrix over QQ."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    dm = DomainMatrix([[cols[j][i] for j in s] for i in range(rows)], (rows, len(s)), QQ)
    return len(s) - dm.rank()


def brute_min_kernel_support(m: DenseMatrix):
    """Scan every support; min |S| with a nonzero kernel vector confined to S."""
    cols = qq_columns(m)
    best = None
    for s in subsets(m.cols):
        if s and qq_nullity(cols, m.rows, s) > 0 and (best is None or len(s) < best):
            best = len(s)
    return best


def fast_brute_uniqueness_fails(m: LinearMapOnMeasureSpace, r) -> bool:
    """Same decision as :func:`brute_uniqueness_fails`, by ranks.

    Pairs (f on S, g on T) with A f = A g form the kernel of [A_S | -A_T].
    The pairs with f = g (any vector on S & T) always lie in it and span
    |S & T| dimensions, so a distinct pair exists iff the nullity is larger.
    """
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    w = m.domain.weights
    cols = qq_columns(m.matrix)
    rows = m.matrix.rows
    small = [s for s in subsets(m.n) if sum((w[i] for i in s), Fraction(0)) <= r]
    for s in small:
        for t in small:
            k = len(s) + len(t)
            if k == 0:
                continue
            block = [[cols[j][i] for j in s] + [-cols[j][i] for j in t] for i in range(rows)]
            nullity = k - DomainMatrix(block, (rows, k), QQ).rank()
            if nullity > len(set(s) & set(t)):
                return True
    return False
