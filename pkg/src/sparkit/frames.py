"""
Finite frames with their analysis and synthesis operators.

A frame is stored through its synthesis matrix (columns are the frame
vectors). Everything exact stays in ``Fraction``; normalization and frame
bounds are floating-point diagnostics only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractViolation, FrameError
from .exact_linalg import DenseMatrix, Vector, dot, rank, vector


@dataclass(frozen=True)
class Frame:
    synthesis: DenseMatrix

    def __post_init__(self):
        m = self.synthesis
        for j, col in enumerate(m.columns()):
            if all(x == 0 for x in col):
                raise FrameError(f"zero frame vector at column {j}")
        if rank(m) < m.rows:
            raise FrameError(f"does not span: rank {rank(m)} < dim {m.rows}")

    @property
    def dim(self) -> int:
        return self.synthesis.rows

    @property
    def count(self) -> int:
        return self.synthesis.cols

    def vectors(self) -> list[Vector]:
        return self.synthesis.columns()


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float


def make_frame(dim: int, columns: Sequence[Sequence]) -> Frame:
    """Build a validated frame for a ``dim``-dimensional space.

    Raises:
        FrameError: a column is zero ("zero frame vector") or the columns
            fail to span ("does not span").
        ContractViolation: a column has the wrong dimension.
    """
    if not columns:
        raise FrameError("does not span: empty collection")
    cols = [vector(c) for c in columns]
    for j, c in enumerate(cols):
        if len(c) != dim:
            raise ContractViolation(f"column {j} has dimension {len(c)}, expected {dim}")
    return Frame(DenseMatrix.from_columns(cols))


def analysis(fr: Frame, h: Sequence) -> Vector:
    """``(<h, tau_j>)_j`` for the standard real inner product."""
    h = vector(h)
    if len(h) != fr.dim:
        raise ContractViolation(f"h has dimension {len(h)}, frame lives in dimension {fr.dim}")
    return tuple(dot(h, tau) for tau in fr.vectors())


def synthesize(fr: Frame, d: Sequence) -> Vector:
    """``sum_j d_j tau_j``."""
    d = vector(d)
    if len(d) != fr.count:
        raise ContractViolation(f"coefficient vector has length {len(d)}, frame has {fr.count} vectors")
    return fr.synthesis.matvec(d)


def to_float(fr: Frame) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in fr.synthesis.to_rows()], dtype=float)


def normalize(fr: Frame) -> np.ndarray:
    """Float matrix whose columns are the frame vectors divided by their norms."""
    a = to_float(fr)
    return a / np.linalg.norm(a, axis=0)


def frame_operator(fr: Frame) -> np.ndarray:
    a = to_float(fr)
    return a @ a.T


def frame_bounds(fr: Frame) -> FrameBounds:
    """Optimal frame bounds: extreme eigenvalues of ``sum_j tau_j tau_j^T``."""
    eig = np.linalg.eigvalsh(frame_operator(fr))
    return FrameBounds(float(eig[0]), float(eig[-1]))
