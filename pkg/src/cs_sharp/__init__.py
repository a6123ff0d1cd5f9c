# cs_sharp: projection-refined Cauchy-Schwarz bounds for vectors, samples and densities
__version__ = "0.1.0"

from .core import (
    BoundReport,
    CoordinateMask,
    CoordinatePrefix,
    ExtremalBounds,
    Identity,
    MeanDirection,
    OrthonormalColumns,
    Partition,
    PartitionAveraging,
    Projection,
    SpanOf,
    TriangleBounds,
    Zero,
    apply_projection,
    as_series,
    d_function,
    enhanced_triangle,
    extremal_bounds,
    lagrange_defect,
    projection_matrix,
    squaring_identity_defect,
)
from .errors import (
    CSSharpError,
    DimensionMismatch,
    DomainError,
    EmptySample,
    InvalidParameter,
    InvalidProjection,
    LagOutOfRange,
    ParseError,
    PreconditionError,
    QuadratureFailure,
    SelfTestFailure,
    SplitOutOfRange,
    UndefinedDivergence,
)
from .shell import app


def cli() -> None:
    app()
