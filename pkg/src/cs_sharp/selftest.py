"""Randomized self-check of the bound chain and the projection laws.

Every suite draws its own cases from one seeded generator, so a run is fully
determined by (seed, cases, max_dim). Defects are scale-free: each is divided
by the natural magnitude of the quantities involved before it is compared
with its tolerance.
"""

from dataclasses import dataclass
import math

import numpy as np
from loguru import logger

from .config import TOLERANCES
from .core import (
    CoordinateMask,
    CoordinatePrefix,
    Identity,
    MeanDirection,
    OrthonormalColumns,
    Partition,
    PartitionAveraging,
    Projection,
    SpanOf,
    Zero,
    d_function,
    enhanced_triangle,
    lagrange_defect,
    squaring_identity_defect,
)
from .errors import InvalidParameter, SelfTestFailure
from .summation import norm, pairwise_dot, squared_norm

PROJECTION_KINDS = ("identity", "zero", "prefix", "mask", "mean", "span", "columns", "partition")


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    max_defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tolerance


@dataclass(frozen=True)
class SelfTestReport:
    seed: int
    cases: int
    max_dim: int
    suites: tuple[SuiteResult, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "max_dim": self.max_dim,
            "passed": self.passed,
            "suites": {
                s.name: {"cases": s.cases, "max_defect": s.max_defect, "tolerance": s.tolerance, "passed": s.passed}
                for s in self.suites
            },
        }


def random_projection(rng: np.random.Generator, n: int, kind: str | None = None) -> Projection:
    """A random projection on R^n of the given kind (or of a random kind)."""
    kind = kind or PROJECTION_KINDS[int(rng.integers(len(PROJECTION_KINDS)))]
    if kind == "identity":
        return Identity()
    if kind == "zero":
        return Zero()
    if kind == "prefix":
        return CoordinatePrefix(int(rng.integers(1, n + 1)))
    if kind == "mask":
        return CoordinateMask(tuple(int(i) for i in np.flatnonzero(rng.random(n) < 0.5)))
    if kind == "mean":
        return MeanDirection()
    if kind == "span":
        return SpanOf(rng.standard_normal(n))
    if kind == "columns":
        m = int(rng.integers(1, n + 1))
        return OrthonormalColumns.spanning(rng.standard_normal((n, m)))
    if kind == "partition":
        groups = int(rng.integers(1, n + 1))
        return PartitionAveraging(Partition.from_labels(rng.integers(0, groups, size=n)))
    raise InvalidParameter(f"unknown projection kind {kind!r}")


def _vector(rng: np.random.Generator, n: int) -> np.ndarray:
    # mixed scales exercise the relative tolerances
    return rng.uniform(-1.0, 1.0, size=n) * 10.0 ** rng.integers(-3, 4)


def _chain(rng, n):
    x, y = _vector(rng, n), _vector(rng, n)
    r = d_function(x, y, random_projection(rng, n))
    return max(r.abs_inner - r.d_value, r.d_value - r.cs_value, 0.0) / r.cs_value


def _attainment(rng, n):
    x, y = _vector(rng, n), _vector(rng, n)
    cs = norm(x) * norm(y)
    top = abs(d_function(x, y, Identity()).d_value - cs)
    bottom = abs(d_function(x, y, Zero()).d_value - cs)
    floor = abs(d_function(x, y, SpanOf(x)).d_value - abs(pairwise_dot(x, y)))
    return max(top, bottom, floor) / cs


def _lagrange(rng, n):
    x, y = _vector(rng, n), _vector(rng, n)
    scale = squared_norm(x) * squared_norm(y)
    inner = pairwise_dot(x, y)
    return abs(lagrange_defect(x, y) - (scale - inner * inner)) / scale


def _squaring(rng, n):
    x, y = _vector(rng, n), _vector(rng, n)
    return squaring_identity_defect(x / norm(x), y / norm(y), random_projection(rng, n))


def _triangle(rng, n):
    x, y = _vector(rng, n), _vector(rng, n)
    t = enhanced_triangle(x, y, random_projection(rng, n))
    return max(norm(x + y) - t.mid, t.mid - t.upper, 0.0) / t.upper


def _projection_laws(rng, n):
    x = _vector(rng, n)
    spec = random_projection(rng, n)
    px = spec.apply(x)
    residual = x - px
    scale = squared_norm(x)
    idempotence = norm(spec.apply(px) - px) / math.sqrt(scale)
    orthogonality = abs(pairwise_dot(px, residual)) / scale
    pythagoras = abs(squared_norm(px) + squared_norm(residual) - scale) / scale
    return max(idempotence, orthogonality, pythagoras)


_SUITES = (
    ("chain", _chain, TOLERANCES.rel),
    ("attainment", _attainment, TOLERANCES.rel),
    ("lagrange", _lagrange, TOLERANCES.rel),
    ("squaring", _squaring, TOLERANCES.abs),
    ("triangle", _triangle, TOLERANCES.rel),
    ("projection_laws", _projection_laws, TOLERANCES.proj),
)


def run_selftest(seed: int = 0, cases: int = 2000, max_dim: int = 32) -> SelfTestReport:
    if cases < 1 or max_dim < 1:
        raise InvalidParameter(f"cases and max_dim must be positive, got {cases}, {max_dim}")
    rng = np.random.default_rng(seed)
    results = []
    for name, check, tol in _SUITES:
        worst = 0.0
        for _ in range(cases):
            n = int(rng.integers(1, max_dim + 1))
            worst = max(worst, float(check(rng, n)))
        results.append(SuiteResult(name=name, cases=cases, max_defect=worst, tolerance=tol))
        logger.info("selftest {}: max defect {:.3e} (tolerance {:.0e})", name, worst, tol)
    return SelfTestReport(seed=seed, cases=cases, max_dim=max_dim, suites=tuple(results))


def ensure_passed(report: SelfTestReport) -> SelfTestReport:
    failed = [s.name for s in report.suites if not s.passed]
    if failed:
        raise SelfTestFailure(f"self-test failed: {', '.join(failed)}", details=report.as_dict())
    return report
