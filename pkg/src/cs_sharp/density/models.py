"""Closed-form densities on [0, 1] and the quadrature oracle built on them.

Smooth models go through adaptive QUADPACK (`scipy.integrate.quad`, with the
QAWO cosine/sine weights for basis coefficients). Piecewise-constant tabulated
models use a fixed composite Gauss-Legendre rule on the union of their cell
edges and a uniform grid, so every panel sees a polynomial integrand.
"""

from dataclasses import dataclass
from functools import cached_property
import math
from typing import Callable

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, stats

from ..config import TOLERANCES
from ..errors import InvalidParameter, QuadratureFailure
from ..summation import pairwise_sum
from .common import BasisFamily, CoefficientVector

_GRID_CELLS = 256
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_QUAD_LIMIT = 400


class DensityModel:
    """A probability density on [0, 1]."""

    breakpoints: tuple[float, ...] = ()

    @property
    def smooth(self) -> bool:
        return True

    def pdf(self, u: ArrayLike) -> NDArray[np.float64]:
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        raise NotImplementedError

    def total_mass(self) -> float:
        return integrate_product([self])


@dataclass(frozen=True)
class Uniform(DensityModel):
    def pdf(self, u: ArrayLike) -> NDArray[np.float64]:
        return np.ones_like(np.asarray(u, dtype=np.float64))

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return rng.random(n)


@dataclass(frozen=True)
class Linear(DensityModel):
    """f(u) = 2u."""

    def pdf(self, u: ArrayLike) -> NDArray[np.float64]:
        return 2.0 * np.asarray(u, dtype=np.float64)

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        # inverse of the CDF u^2
        return np.sqrt(rng.random(n))


@dataclass(frozen=True)
class TruncatedNormal(DensityModel):
    mu: float = 0.5
    sigma: float = 0.2

    def __post_init__(self):
        if not math.isfinite(self.mu) or not (math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidParameter(f"truncated normal needs finite mu and sigma > 0, got {self.mu}, {self.sigma}")

    @cached_property
    def _dist(self):
        a = (0.0 - self.mu) / self.sigma
        b = (1.0 - self.mu) / self.sigma
        return stats.truncnorm(a, b, loc=self.mu, scale=self.sigma)

    def pdf(self, u: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(self._dist.pdf(np.asarray(u, dtype=np.float64)), dtype=np.float64)

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return np.asarray(self._dist.rvs(size=n, random_state=rng), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class Tabulated(DensityModel):
    """Piecewise-constant density: `heights[i]` on [edges[i], edges[i + 1])."""

    edges: tuple[float, ...]
    heights: tuple[float, ...]

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        heights = tuple(float(h) for h in self.heights)
        if len(edges) < 2 or len(heights) != len(edges) - 1:
            raise InvalidParameter("tabulated density needs len(heights) == len(edges) - 1 >= 1")
        if edges[0] != 0.0 or edges[-1] != 1.0 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise InvalidParameter("tabulated edges must increase strictly from 0 to 1")
        if any(not math.isfinite(h) or h < 0 for h in heights):
            raise InvalidParameter("tabulated heights must be finite and non-negative")
        mass = math.fsum(h * (b - a) for h, a, b in zip(heights, edges, edges[1:]))
        if abs(mass - 1.0) > 1e-8:
            raise InvalidParameter(f"tabulated density integrates to {mass}, not 1")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "breakpoints", edges)

    @classmethod
    def from_weights(cls, edges: ArrayLike, weights: ArrayLike) -> "Tabulated":
        """Heights from cell probabilities (normalized to sum 1)."""
        e = np.asarray(edges, dtype=np.float64)
        w = np.asarray(weights, dtype=np.float64)
        w = w / w.sum()
        return cls(tuple(e), tuple(w / np.diff(e)))

    @property
    def smooth(self) -> bool:
        return False

    def pdf(self, u: ArrayLike) -> NDArray[np.float64]:
        arr = np.asarray(u, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.edges, arr, side="right") - 1, 0, len(self.heights) - 1)
        return np.asarray(self.heights)[idx]

    def sample(self, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
        edges = np.asarray(self.edges)
        widths = np.diff(edges)
        probs = np.asarray(self.heights) * widths
        cells = rng.choice(len(widths), size=n, p=probs / probs.sum())
        return edges[cells] + rng.random(n) * widths[cells]


def _composite_nodes(breaks: tuple[float, ...]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    cuts = np.union1d(np.linspace(0.0, 1.0, _GRID_CELLS + 1), np.asarray(breaks, dtype=np.float64))
    lo, hi = cuts[:-1], cuts[1:]
    half = (hi - lo) / 2.0
    nodes = (lo + half)[:, None] + half[:, None] * _GL_NODES[None, :]
    weights = half[:, None] * _GL_WEIGHTS[None, :]
    return nodes.ravel(), weights.ravel()


def _quad(func: Callable[[float], float], **kwargs) -> float:
    result = integrate.quad(
        func,
        0.0,
        1.0,
        epsabs=TOLERANCES.quad,
        epsrel=1e-12,
        limit=_QUAD_LIMIT,
        full_output=1,
        **kwargs,
    )
    if len(result) > 3:
        raise QuadratureFailure(f"adaptive quadrature did not converge: {result[3]}")
    return float(result[0])


def integrate_product(
    models: list[DensityModel],
    basis: BasisFamily | None = None,
    k: int = 1,
) -> float:
    """Integral over [0, 1] of the product of the model densities, times e_k when a basis is given."""
    use_basis = basis is not None and k > 1
    if any(not m.smooth for m in models):
        breaks = tuple(sorted({b for m in models for b in m.breakpoints}))
        nodes, weights = _composite_nodes(breaks)
        values = np.ones_like(nodes)
        for m in models:
            values = values * m.pdf(nodes)
        if use_basis:
            values = values * basis.evaluate(k, nodes)
        logger.debug("composite rule over {} nodes for tabulated models", nodes.size)
        return pairwise_sum(values * weights)

    def integrand(u: float) -> float:
        value = 1.0
        for m in models:
            value = value * float(m.pdf(u))
        return value

    if not use_basis:
        return _quad(integrand)
    omega, fn = basis.frequency(k)
    return math.sqrt(2.0) * _quad(integrand, weight=fn, wvar=omega)


def l2_inner(f: DensityModel, g: DensityModel) -> float:
    return integrate_product([f, g])


def l2_norm_squared(f: DensityModel) -> float:
    return integrate_product([f, f])


def exact_coefficients(model: DensityModel, basis: BasisFamily, count: int) -> CoefficientVector:
    """<f, e_k> for k = 1..count by quadrature; the oracle for the sample estimators.

    Models live on [0, 1], so the basis domain map plays no part here.
    """
    if int(count) != count or count < 1:
        raise InvalidParameter(f"coefficient count must be >= 1, got {count}")
    values = np.array([integrate_product([model], basis, k) for k in range(1, int(count) + 1)])
    values.setflags(write=False)
    return CoefficientVector(values=values, n=0, basis=basis)
