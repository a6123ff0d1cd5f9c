"""Sample covariance, cross-covariance and correlation bounds.

All population quantities are realised under the empirical measure with 1/n
normalization: E X is the sample mean, ||X||^2 the mean of squares and
sigma_X^2 = ||x||^2 / n - mean(x)^2.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from .config import TOLERANCES
from .core import (
    CoordinatePrefix,
    Partition,
    Projection,
    Series,
    as_series,
    d_function,
)
from .errors import InvalidParameter, LagOutOfRange, SplitOutOfRange, require_same_length
from .summation import mean, norm, pairwise_dot, squared_norm

__all__ = [
    "BoundPair",
    "CorrelationReport",
    "CrossCovBound",
    "MeasurableBound",
    "Partition",
    "SplitChoice",
    "SquaredBound",
    "best_split",
    "conditional_corr",
    "conditional_expectation",
    "cross_cov_bound",
    "expectation_variant_bound",
    "lag_split_bound",
    "measurable_cov_bound",
    "p_correlation",
    "projected_pair_correlation",
    "quantile_partition",
    "sample_cov_bound",
    "sample_cov_squared_bound",
    "sample_mean_bound",
]


class BoundPair(NamedTuple):
    lhs: float
    rhs: float


class SquaredBound(NamedTuple):
    lhs: float
    rhs: float
    defect: float


class SplitChoice(NamedTuple):
    k_star: int
    d_min: float


class MeasurableBound(NamedTuple):
    lhs: float
    mid: float
    rhs: float


@dataclass(frozen=True)
class CrossCovBound:
    h: int
    k: int
    r_bar: float
    d_bound: float
    cs_bound: float

    def chain_holds(self, tol: float = TOLERANCES.rel) -> bool:
        slack = tol * self.cs_bound
        return abs(self.r_bar) <= self.d_bound + slack and self.d_bound <= self.cs_bound + slack


@dataclass(frozen=True)
class CorrelationReport:
    rho: float
    rho_p: float
    d_denominator: float
    cov: float
    sigma_x: float
    sigma_y: float

    @property
    def rho_dominated(self) -> bool:
        return abs(self.rho) <= abs(self.rho_p) * (1.0 + TOLERANCES.rel)

    @property
    def rho_p_bounded(self) -> bool:
        return abs(self.rho_p) <= 1.0


def _pair(x: ArrayLike, y: ArrayLike) -> tuple[Series, Series]:
    xs = as_series(x, "x")
    ys = as_series(y, "y")
    require_same_length(xs, ys, "x and y")
    return xs, ys


def _centered_energy(sq: float, n: int, m: float) -> float:
    # ||x||^2 - n * mean^2, clipped at the rounding floor
    return max(sq - n * m * m, 0.0)


def sample_mean_bound(x: ArrayLike, y: ArrayLike) -> BoundPair:
    """|sum x_i y_i| <= n|mean(x) mean(y)| + ||x'|| ||y'||, the mean-direction D bound."""
    xs, ys = _pair(x, y)
    n = len(xs)
    mx, my = mean(xs), mean(ys)
    rhs = n * abs(mx * my) + math.sqrt(_centered_energy(squared_norm(xs), n, mx)) * math.sqrt(
        _centered_energy(squared_norm(ys), n, my)
    )
    return BoundPair(abs(pairwise_dot(xs, ys)), rhs)


def sample_cov_bound(x: ArrayLike, y: ArrayLike) -> BoundPair:
    """|<x, y> - n mean(x) mean(y)| <= n s(x) s(y)."""
    xs, ys = _pair(x, y)
    n = len(xs)
    mx, my = mean(xs), mean(ys)
    lhs = abs(pairwise_dot(xs, ys) - n * mx * my)
    rhs = math.sqrt(_centered_energy(squared_norm(xs), n, mx) * _centered_energy(squared_norm(ys), n, my))
    return BoundPair(lhs, rhs)


def sample_cov_squared_bound(x: ArrayLike, y: ArrayLike) -> SquaredBound:
    """Squared mean-direction bound in its subtracted form.

    rhs = ||x||^2 ||y||^2 - n (|mean x| ||y'|| - |mean y| ||x'||)^2, which equals
    the square of `sample_mean_bound`'s right side.
    """
    xs, ys = _pair(x, y)
    n = len(xs)
    mx, my = mean(xs), mean(ys)
    sx, sy = squared_norm(xs), squared_norm(ys)
    cx = math.sqrt(_centered_energy(sx, n, mx))
    cy = math.sqrt(_centered_energy(sy, n, my))
    lhs = pairwise_dot(xs, ys) ** 2
    rhs = sx * sy - n * (abs(mx) * cy - abs(my) * cx) ** 2
    squared_form = (n * abs(mx * my) + cx * cy) ** 2
    if abs(squared_form - rhs) > TOLERANCES.rel * max(sx * sy, 1.0):
        logger.warning("squared bound forms disagree: {} vs {}", squared_form, rhs)
    return SquaredBound(lhs, rhs, rhs - lhs)


def expectation_variant_bound(x: ArrayLike, y: ArrayLike) -> BoundPair:
    """(E XY)^2 <= E X^2 E Y^2 - (|E X| sigma_Y - |E Y| sigma_X)^2 on the empirical measure."""
    xs, ys = _pair(x, y)
    n = len(xs)
    mx, my = mean(xs), mean(ys)
    mx2, my2 = squared_norm(xs) / n, squared_norm(ys) / n
    sigma_x = math.sqrt(max(mx2 - mx * mx, 0.0))
    sigma_y = math.sqrt(max(my2 - my * my, 0.0))
    lhs = (pairwise_dot(xs, ys) / n) ** 2
    rhs = mx2 * my2 - (abs(mx) * sigma_y - abs(my) * sigma_x) ** 2
    return BoundPair(lhs, rhs)


def _lagged(x: ArrayLike, y: ArrayLike, h: int, center: bool) -> tuple[Series, Series, int]:
    xs, ys = _pair(x, y)
    n = len(xs)
    if int(h) != h or not 1 <= h <= n - 1:
        raise LagOutOfRange(f"lag h={h} outside 1..{n - 1}")
    if center:
        xs = xs - mean(xs)
        ys = ys - mean(ys)
    return xs[: n - h], ys[h:], n


def cross_cov_bound(x: ArrayLike, y: ArrayLike, h: int, k: int, center: bool = True) -> CrossCovBound:
    """Sample cross-covariance at lag h with its D(x, z | P_k) / n bound, z_t = y_{t+h}."""
    head, z, n = _lagged(x, y, h, center)
    m = len(head)
    if int(k) != k or not 1 <= k <= m:
        raise SplitOutOfRange(f"split k={k} outside 1..{m}")
    report = d_function(head, z, CoordinatePrefix(int(k)))
    return CrossCovBound(
        h=int(h),
        k=int(k),
        r_bar=report.inner / n,
        d_bound=report.d_value / n,
        cs_bound=report.cs_value / n,
    )


def best_split(x: ArrayLike, y: ArrayLike, h: int, center: bool = True) -> SplitChoice:
    """Split k minimising the cross-covariance D bound.

    Prefix sums of squares rank the candidates; ties resolve to the smallest k.
    `d_min` is recomputed at k_star with pairwise sums, so it equals
    `cross_cov_bound(x, y, h, k_star, center).d_bound` bit for bit.
    """
    head, z, _ = _lagged(x, y, h, center)
    a2 = np.cumsum(head * head)
    z2 = np.cumsum(z * z)
    tail_a = np.cumsum((head * head)[::-1])[::-1]
    tail_z = np.cumsum((z * z)[::-1])[::-1]
    # k runs 1..m; the residual block for k = m is empty
    rest_a = np.append(tail_a[1:], 0.0)
    rest_z = np.append(tail_z[1:], 0.0)
    bounds = np.sqrt(a2) * np.sqrt(z2) + np.sqrt(rest_a) * np.sqrt(rest_z)
    k_star = int(np.argmin(bounds)) + 1
    logger.debug("best split for h={}: k={} over {} candidates", h, k_star, len(bounds))
    return SplitChoice(k_star=k_star, d_min=cross_cov_bound(x, y, h, k_star, center).d_bound)


def lag_split_bound(x: ArrayLike, y: ArrayLike, h: int, center: bool = True) -> float:
    """The k = h bound written with block sample second moments.

    (h/n) sqrt(mean x^2_{1:h}) sqrt(mean y^2_{h+1:2h})
      + (1 - 2h/n) sqrt(mean x^2_{h+1:n-h}) sqrt(mean y^2_{2h+1:n})
    """
    head, z, n = _lagged(x, y, h, center)
    if 2 * h > n:
        raise SplitOutOfRange(f"the k = h bound needs h <= n/2, got h={h}, n={n}")
    first = (h / n) * math.sqrt(squared_norm(head[:h]) / h) * math.sqrt(squared_norm(z[:h]) / h)
    width = n - 2 * h
    if width == 0:
        return first
    second = (
        (width / n) * math.sqrt(squared_norm(head[h:]) / width) * math.sqrt(squared_norm(z[h:]) / width)
    )
    return first + second


def conditional_expectation(x: ArrayLike, p: Partition) -> Series:
    """E(x | G) for the sigma-algebra generated by `p`: group means."""
    return p.group_means(as_series(x, "x"))


def quantile_partition(y: ArrayLike, bins: int) -> Partition:
    """Equal-count bins over the stable rank order of y."""
    ys = as_series(y, "y")
    n = len(ys)
    if int(bins) != bins or not 1 <= bins <= n:
        raise InvalidParameter(f"bins must lie in 1..{n}, got {bins}")
    order = np.argsort(ys, kind="stable")
    labels = np.empty(n, dtype=np.intp)
    labels[order] = (np.arange(n) * int(bins)) // n
    return Partition(labels)


def _sigma(centered: Series) -> float:
    return math.sqrt(squared_norm(centered) / len(centered))


def conditional_corr(x: ArrayLike, y: ArrayLike, p: Partition) -> CorrelationReport:
    """Correlation refined by conditioning on the partition's sigma-algebra."""
    xs, ys = _pair(x, y)
    n = len(xs)
    xc = xs - mean(xs)
    yc = ys - mean(ys)
    var_x = squared_norm(xc) / n
    var_y = squared_norm(yc) / n
    ex = p.group_means(xc)
    ey = p.group_means(yc)
    var_ex = squared_norm(ex) / n
    var_ey = squared_norm(ey) / n
    sigma_x, sigma_y = math.sqrt(var_x), math.sqrt(var_y)
    d_den = math.sqrt(var_ex) * math.sqrt(var_ey) + math.sqrt(max(var_x - var_ex, 0.0)) * math.sqrt(
        max(var_y - var_ey, 0.0)
    )
    cov = pairwise_dot(xc, yc) / n
    return _correlation(cov, cov, sigma_x * sigma_y, d_den, sigma_x, sigma_y, d_den)


def _ratio(num: float, den: float) -> float:
    # 0/0 is set to zero; a zero D forces a zero numerator
    if den <= 0:
        return 0.0
    ratio = num / den
    # only rounding overshoot is snapped back; larger excursions stay visible
    if 1.0 < abs(ratio) <= 1.0 + TOLERANCES.rel:
        return math.copysign(1.0, ratio)
    return ratio


def _correlation(
    cov: float,
    num: float,
    cs_den: float,
    d_den: float,
    sigma_x: float,
    sigma_y: float,
    d_denominator: float,
) -> CorrelationReport:
    return CorrelationReport(
        rho=_ratio(num, cs_den),
        rho_p=_ratio(num, d_den),
        d_denominator=d_denominator,
        cov=cov,
        sigma_x=sigma_x,
        sigma_y=sigma_y,
    )


def p_correlation(x: ArrayLike, y: ArrayLike, spec: Projection) -> CorrelationReport:
    """rho(P) = cov(x, y) / D(x', y' | P) on centered series.

    Both ratios are taken on the unnormalized D report so that P = I reproduces
    the classical coefficient exactly; reported moments use the 1/n scale.
    """
    xs, ys = _pair(x, y)
    n = len(xs)
    xc = xs - mean(xs)
    yc = ys - mean(ys)
    r = d_function(xc, yc, spec)
    return _correlation(r.inner / n, r.inner, r.cs_value, r.d_value, _sigma(xc), _sigma(yc), r.d_value / n)


def projected_pair_correlation(x: ArrayLike, y: ArrayLike, spec: Projection) -> float:
    """Classical correlation of (P x', P y'); differs from rho(P) in general."""
    xs, ys = _pair(x, y)
    px = spec.apply(xs - mean(xs))
    py = spec.apply(ys - mean(ys))
    px = px - mean(px)
    py = py - mean(py)
    den = norm(px) * norm(py)
    return pairwise_dot(px, py) / den if den > 0 else 0.0


def measurable_cov_bound(x: ArrayLike, y: ArrayLike, p: Partition) -> MeasurableBound:
    """|cov(X, Y)| <= sigma_{E(X|G)} sigma_Y <= sigma_X sigma_Y for G-measurable Y.

    Y enters through E(Y | G), which is Y itself when y is constant on groups.
    """
    xs, ys = _pair(x, y)
    n = len(xs)
    xc = xs - mean(xs)
    yg = p.group_means(ys - mean(ys))
    sigma_yg = math.sqrt(squared_norm(yg) / n)
    lhs = abs(pairwise_dot(xc, yg) / n)
    mid = math.sqrt(squared_norm(p.group_means(xc)) / n) * sigma_yg
    return MeasurableBound(lhs, mid, _sigma(xc) * sigma_yg)
