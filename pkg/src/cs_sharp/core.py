# Orthogonal projections on R^n and the projection-refined Cauchy-Schwarz bound
from dataclasses import dataclass, field
from functools import cached_property
import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import TOLERANCES
from .errors import DimensionMismatch, InvalidParameter, InvalidProjection, require_same_length
from .summation import mean, norm, pairwise_dot, pairwise_sum, squared_norm

Series = NDArray[np.float64]


def as_series(values: ArrayLike, name: str = "x") -> Series:
    """Validate `values` as a finite, non-empty real vector and freeze a copy."""
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"{name} is not a real vector: {exc}") from exc
    if arr.ndim != 1:
        raise InvalidParameter(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidParameter(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{name} contains NaN or infinite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Partition:
    """Group labels over sample indices; generates a finite sigma-algebra.

    Labels may be arbitrary integers. They are renumbered to dense ids in
    increasing label order.
    """

    labels: NDArray[np.intp]
    group_count: int = field(init=False)

    def __post_init__(self):
        raw = np.asarray(self.labels)
        if raw.ndim != 1 or raw.size == 0:
            raise InvalidParameter("partition labels must be a non-empty 1-D sequence")
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or not np.all(raw == np.round(raw)):
                raise InvalidParameter("partition labels must be integers")
            raw = raw.astype(np.int64)
        elif raw.dtype.kind not in "iu":
            raise InvalidParameter(f"partition labels must be integers, got dtype {raw.dtype}")
        _, dense = np.unique(raw, return_inverse=True)
        dense = dense.astype(np.intp).ravel()
        dense.setflags(write=False)
        object.__setattr__(self, "labels", dense)
        object.__setattr__(self, "group_count", int(dense.max()) + 1)

    @classmethod
    def from_labels(cls, labels: ArrayLike) -> "Partition":
        return cls(np.asarray(labels))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.intp))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n, dtype=np.intp))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def counts(self) -> NDArray[np.intp]:
        return np.bincount(self.labels, minlength=self.group_count)

    @cached_property
    def _order(self) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        order = np.argsort(self.labels, kind="stable")
        starts = np.concatenate([[0], np.cumsum(self.counts)[:-1]]).astype(np.intp)
        return order, starts

    def group_means(self, x: Series) -> Series:
        """E(x | G) under the empirical measure: each entry replaced by its group mean."""
        if len(x) != self.n:
            raise DimensionMismatch(f"partition has {self.n} labels but the series has {len(x)} entries")
        order, starts = self._order
        sums = np.add.reduceat(np.asarray(x, dtype=np.float64)[order], starts)
        return (sums / self.counts)[self.labels]

    def indicator_basis(self) -> NDArray[np.float64]:
        """Orthonormal columns spanning the group-constant vectors."""
        basis = np.zeros((self.n, self.group_count))
        basis[np.arange(self.n), self.labels] = 1.0 / np.sqrt(self.counts[self.labels])
        return basis


class Projection:
    """Declarative orthogonal projection on R^n."""

    def check(self, n: int) -> None:
        pass

    def _apply(self, x: Series) -> Series:
        raise NotImplementedError

    def apply(self, x: ArrayLike) -> Series:
        series = as_series(x)
        self.check(len(series))
        return self._apply(series)

    def matrix(self, n: int) -> NDArray[np.float64]:
        """Matrix of the projection in the canonical basis of R^n."""
        self.check(n)
        eye = np.eye(n)
        return np.column_stack([self._apply(eye[:, j]) for j in range(n)])


@dataclass(frozen=True)
class Identity(Projection):
    def _apply(self, x: Series) -> Series:
        return x.copy()


@dataclass(frozen=True)
class Zero(Projection):
    def _apply(self, x: Series) -> Series:
        return np.zeros_like(x)


@dataclass(frozen=True)
class CoordinatePrefix(Projection):
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidProjection(f"prefix length must be a positive integer, got {self.k}")

    def check(self, n: int) -> None:
        if self.k > n:
            raise DimensionMismatch(f"prefix length {self.k} exceeds dimension {n}")

    def _apply(self, x: Series) -> Series:
        out = np.zeros_like(x)
        out[: self.k] = x[: self.k]
        return out


@dataclass(frozen=True)
class CoordinateMask(Projection):
    """Keeps the coordinates in `indices` (0-based) and zeroes the rest."""

    indices: tuple[int, ...]

    def __post_init__(self):
        try:
            cleaned = tuple(sorted({int(i) for i in self.indices}))
        except (TypeError, ValueError) as exc:
            raise InvalidProjection(f"mask indices must be integers: {exc}") from exc
        if cleaned and cleaned[0] < 0:
            raise InvalidProjection("mask indices must be non-negative")
        object.__setattr__(self, "indices", cleaned)

    def check(self, n: int) -> None:
        if self.indices and self.indices[-1] >= n:
            raise DimensionMismatch(f"mask index {self.indices[-1]} out of range for dimension {n}")

    def _apply(self, x: Series) -> Series:
        out = np.zeros_like(x)
        idx = list(self.indices)
        out[idx] = x[idx]
        return out


@dataclass(frozen=True)
class MeanDirection(Projection):
    """Projection onto the span of (1, ..., 1)."""

    def _apply(self, x: Series) -> Series:
        return np.full_like(x, mean(x))


@dataclass(frozen=True, eq=False)
class SpanOf(Projection):
    vector: Series

    def __post_init__(self):
        v = as_series(self.vector, "span vector")
        if squared_norm(v) == 0.0:
            raise InvalidProjection("cannot project onto the span of the zero vector")
        object.__setattr__(self, "vector", v)

    def check(self, n: int) -> None:
        if len(self.vector) != n:
            raise DimensionMismatch(f"span vector has {len(self.vector)} entries, series has {n}")

    def _apply(self, x: Series) -> Series:
        v = self.vector
        return (pairwise_dot(v, x) / squared_norm(v)) * v


@dataclass(frozen=True, eq=False)
class OrthonormalColumns(Projection):
    """Projection onto the column span of an n x m matrix with orthonormal columns."""

    basis: NDArray[np.float64]

    def __post_init__(self):
        try:
            b = np.array(self.basis, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidProjection(f"basis is not a real matrix: {exc}") from exc
        if b.ndim == 1:
            b = b[:, None]
        if b.ndim != 2:
            raise InvalidProjection(f"basis must be a matrix, got shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise InvalidProjection("basis contains NaN or infinite entries")
        gram = b.T @ b
        err = float(np.max(np.abs(gram - np.eye(b.shape[1])))) if b.shape[1] else 0.0
        if err > TOLERANCES.orth:
            raise InvalidProjection(f"basis columns are not orthonormal (max |B^T B - I| = {err:.3e})")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def spanning(cls, matrix: ArrayLike) -> "OrthonormalColumns":
        """Orthonormalize the columns of `matrix` with a reduced QR factorization."""
        q, _ = np.linalg.qr(np.asarray(matrix, dtype=np.float64), mode="reduced")
        return cls(q)

    def check(self, n: int) -> None:
        if self.basis.shape[0] != n:
            raise DimensionMismatch(f"basis has {self.basis.shape[0]} rows, series has {n}")

    def _apply(self, x: Series) -> Series:
        coeffs = pairwise_sum(self.basis * x[:, None], axis=0)
        return pairwise_sum(self.basis * coeffs[None, :], axis=1)


@dataclass(frozen=True, eq=False)
class PartitionAveraging(Projection):
    """P_G: conditional expectation on the sigma-algebra generated by a partition."""

    partition: Partition

    def check(self, n: int) -> None:
        if self.partition.n != n:
            raise DimensionMismatch(f"partition has {self.partition.n} labels, series has {n}")

    def _apply(self, x: Series) -> Series:
        return self.partition.group_means(x)


def apply_projection(spec: Projection, x: ArrayLike) -> Series:
    return spec.apply(x)


def projection_matrix(spec: Projection, n: int) -> NDArray[np.float64]:
    return spec.matrix(n)


@dataclass(frozen=True)
class BoundReport:
    inner: float
    abs_inner: float
    d_value: float
    cs_value: float
    p_norm_x: float
    p_norm_y: float
    residual_x: float
    residual_y: float

    @property
    def d_over_cs(self) -> float | None:
        return self.d_value / self.cs_value if self.cs_value > 0 else None

    @property
    def inner_over_d(self) -> float | None:
        return self.abs_inner / self.d_value if self.d_value > 0 else None

    def chain_holds(self, tol: float = TOLERANCES.rel) -> bool:
        slack = tol * self.cs_value
        return self.abs_inner <= self.d_value + slack and self.d_value <= self.cs_value + slack


def _pair(x: ArrayLike, y: ArrayLike) -> tuple[Series, Series]:
    xs = as_series(x, "x")
    ys = as_series(y, "y")
    require_same_length(xs, ys, "x and y")
    return xs, ys


def d_function(x: ArrayLike, y: ArrayLike, spec: Projection) -> BoundReport:
    """D(x, y | P) = ||Px|| ||Py|| + ||x - Px|| ||y - Py|| with the surrounding chain."""
    xs, ys = _pair(x, y)
    px = spec.apply(xs)
    py = spec.apply(ys)
    # order is fixed so that swapping x and y reuses the same scalars
    p_norm_x = norm(px)
    p_norm_y = norm(py)
    residual_x = norm(xs - px)
    residual_y = norm(ys - py)
    inner = pairwise_dot(xs, ys)
    return BoundReport(
        inner=inner,
        abs_inner=abs(inner),
        d_value=p_norm_x * p_norm_y + residual_x * residual_y,
        cs_value=norm(xs) * norm(ys),
        p_norm_x=p_norm_x,
        p_norm_y=p_norm_y,
        residual_x=residual_x,
        residual_y=residual_y,
    )


class ExtremalBounds(NamedTuple):
    lower: float
    upper: float


def extremal_bounds(x: ArrayLike, y: ArrayLike) -> ExtremalBounds:
    """Infimum and supremum of D(x, y | P) over all orthogonal projections."""
    xs, ys = _pair(x, y)
    upper = d_function(xs, ys, Identity()).d_value
    if squared_norm(xs) == 0.0:
        return ExtremalBounds(0.0, upper)
    return ExtremalBounds(d_function(xs, ys, SpanOf(xs)).d_value, upper)


def lagrange_defect(x: ArrayLike, y: ArrayLike) -> float:
    """||C||_2^2 for the antisymmetric matrix c_ij = (x_i y_j - x_j y_i) / sqrt(2)."""
    xs, ys = _pair(x, y)
    c = (np.outer(xs, ys) - np.outer(ys, xs)) / math.sqrt(2.0)
    return pairwise_sum(c * c)


def squaring_identity_defect(x: ArrayLike, y: ArrayLike, spec: Projection) -> float:
    r = d_function(x, y, spec)
    px, py, qx, qy = r.p_norm_x, r.p_norm_y, r.residual_x, r.residual_y
    lhs = (px * py + qx * qy) ** 2 + (px * qy - py * qx) ** 2
    rhs = (px * px + qx * qx) * (py * py + qy * qy)
    return abs(lhs - rhs)


class TriangleBounds(NamedTuple):
    mid: float
    upper: float


def enhanced_triangle(x: ArrayLike, y: ArrayLike, spec: Projection) -> TriangleBounds:
    """||x + y|| <= mid <= ||x|| + ||y||."""
    xs, ys = _pair(x, y)
    r = d_function(xs, ys, spec)
    mid = math.hypot(r.p_norm_x + r.p_norm_y, r.residual_x + r.residual_y)
    return TriangleBounds(mid=mid, upper=norm(xs) + norm(ys))
