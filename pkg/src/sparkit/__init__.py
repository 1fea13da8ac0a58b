"""Exact spark computation, sparse recovery and uniqueness certificates on finite measure spaces."""

from .errors import (
    ContractViolation,
    FrameError,
    InconsistencyError,
    PreconditionError,
    ResourceGuardError,
    SparkitError,
)
from .exact_linalg import DenseMatrix, kernel_basis, rank, solve_on_support
from .frames import Frame, FrameBounds, analysis, frame_bounds, make_frame, normalize, synthesize
from .measure import FiniteMeasureSpace, counting_measure, measure_of, support
from .spark import (
    INFINITE,
    LinearMapOnMeasureSpace,
    SparkResult,
    coherence_floor,
    enumerate_circuits,
    spark_combinatorial,
    spark_kernel,
    weighted_spark,
)
from .sparsity import (
    Certificate,
    GeneratorSpec,
    SparseSolution,
    certify_half_spark,
    check_uncertainty,
    l0_solve,
    probe_converse,
    search_converse_violations,
    uniqueness_level,
)

__version__ = "0.1.0"
