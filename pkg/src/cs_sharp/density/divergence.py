# Cauchy-Schwarz divergence, its projection-refined variant and their estimators
from dataclasses import dataclass
import math

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..errors import EmptySample, InvalidParameter, UndefinedDivergence
from ..summation import pairwise_dot, pairwise_sum, squared_norm
from .common import BasisFamily, CoefficientVector
from .models import DensityModel, exact_coefficients, l2_inner, l2_norm_squared


@dataclass(frozen=True)
class DivergenceEstimate:
    """The projection estimate of Div(f, g | P_N) with its building blocks.

    t_hat and r_hat are sums of squared coefficient estimates and are biased
    upward by the coefficient variances; no debiasing is applied.
    """

    value: float
    t_hat_f: float
    t_hat_g: float
    r_hat_f: float
    r_hat_g: float
    denom: float
    N: int
    n_f: int
    n_g: int


def _check_order(N: int) -> int:
    if int(N) != N or N < 1:
        raise InvalidParameter(f"N must be a positive integer, got {N}")
    return int(N)


def estimate_coefficients(sample: ArrayLike, basis: BasisFamily, count: int) -> CoefficientVector:
    """f_hat_k = mean of e_k over the sample, k = 1..count."""
    arr = np.asarray(sample, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptySample("cannot estimate coefficients from an empty sample")
    count = _check_order(count)
    u = basis.domain.to_unit(arr)
    # one column at a time keeps memory at O(n) for large N
    values = np.array([pairwise_sum(basis.evaluate(k, u)) for k in range(1, count + 1)]) / arr.size
    values.setflags(write=False)
    return CoefficientVector(values=values, n=int(arr.size), basis=basis)


def estimate_divergence(
    sample_f: ArrayLike,
    sample_g: ArrayLike,
    basis: BasisFamily,
    N: int,
) -> DivergenceEstimate:
    """T_hat = log((sqrt(t_f t_g) + sqrt(r_f r_g)) / sum_{k <= 2N} f_hat_k g_hat_k)."""
    N = _check_order(N)
    cf = estimate_coefficients(sample_f, basis, 2 * N)
    cg = estimate_coefficients(sample_g, basis, 2 * N)
    t_f, t_g = squared_norm(cf.head(N)), squared_norm(cg.head(N))
    r_f, r_g = squared_norm(cf.tail(N)), squared_norm(cg.tail(N))
    # split like the numerator so identical samples give a ratio of exactly 1
    denom = pairwise_dot(cf.head(N), cg.head(N)) + pairwise_dot(cf.tail(N), cg.tail(N))
    numerator = math.sqrt(t_f * t_g) + math.sqrt(r_f * r_g)
    logger.debug("divergence estimate N={} n_f={} n_g={} denom={}", N, cf.n, cg.n, denom)
    if denom <= 0.0:
        raise UndefinedDivergence(
            f"coefficient cross-product sum is {denom:.6g} <= 0; increase the sample size or N",
            details={
                "t_hat_f": t_f,
                "t_hat_g": t_g,
                "r_hat_f": r_f,
                "r_hat_g": r_g,
                "denom": denom,
                "N": N,
                "n_f": cf.n,
                "n_g": cg.n,
            },
        )
    return DivergenceEstimate(
        value=math.log(numerator / denom),
        t_hat_f=t_f,
        t_hat_g=t_g,
        r_hat_f=r_f,
        r_hat_g=r_g,
        denom=denom,
        N=N,
        n_f=cf.n,
        n_g=cg.n,
    )


def _positive_inner(f: DensityModel, g: DensityModel) -> float:
    inner = l2_inner(f, g)
    if inner <= 0.0:
        raise UndefinedDivergence(f"densities do not overlap (integral of f g = {inner:.3g})")
    return inner


def cs_divergence_exact(f: DensityModel, g: DensityModel) -> float:
    """-log(int f g / (||f|| ||g||))."""
    inner = _positive_inner(f, g)
    return -math.log(inner / math.sqrt(l2_norm_squared(f) * l2_norm_squared(g)))


def _projected_d(f: DensityModel, g: DensityModel, basis: BasisFamily, N: int) -> tuple[float, float]:
    """D(f, g | P_N) and ||f|| ||g|| from exact coefficients and exact norms."""
    nf2, ng2 = l2_norm_squared(f), l2_norm_squared(g)
    t_f = squared_norm(exact_coefficients(f, basis, N).values)
    t_g = squared_norm(exact_coefficients(g, basis, N).values)
    r_f = max(nf2 - t_f, 0.0)
    r_g = max(ng2 - t_g, 0.0)
    return math.sqrt(t_f * t_g) + math.sqrt(r_f * r_g), math.sqrt(nf2 * ng2)


def cs_p_divergence_exact(f: DensityModel, g: DensityModel, basis: BasisFamily, N: int) -> float:
    """-log(int f g / D(f, g | P_N)); never exceeds `cs_divergence_exact`."""
    N = _check_order(N)
    inner = _positive_inner(f, g)
    d_value, _ = _projected_d(f, g, basis, N)
    return -math.log(inner / d_value)


def divergence_gap(f: DensityModel, g: DensityModel, basis: BasisFamily, N: int) -> float:
    """Div(f, g | I) - Div(f, g | P_N) = -log(D(f, g | P_N) / (||f|| ||g||)) >= 0."""
    N = _check_order(N)
    d_value, cs_value = _projected_d(f, g, basis, N)
    return -math.log(d_value / cs_value)
