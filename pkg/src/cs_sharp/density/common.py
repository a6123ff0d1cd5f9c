# Orthonormal bases on [0, 1] and the affine map from data to the unit interval
from dataclasses import dataclass, field
import math
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import DomainError, EmptySample, InvalidParameter

BasisKind = Literal["cosine", "trigonometric"]
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DomainMap:
    """Affine map of [a, b] onto [0, 1]; observations outside are rejected, not clamped."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.b <= self.a:
            raise InvalidParameter(f"invalid range [{self.a}, {self.b}]")

    @classmethod
    def auto(cls, *samples: ArrayLike, pad: float = 0.05) -> "DomainMap":
        """Pooled min/max widened by `pad` times the span on both sides."""
        arrays = [np.asarray(s, dtype=np.float64).ravel() for s in samples]
        arrays = [arr for arr in arrays if arr.size]
        if not arrays:
            raise EmptySample("cannot infer a range from empty samples")
        pooled = np.concatenate(arrays)
        lo, hi = float(pooled.min()), float(pooled.max())
        span = hi - lo
        if span == 0.0:
            span = max(abs(lo), 1.0)
        return cls(lo - pad * span, hi + pad * span)

    def to_unit(self, values: ArrayLike) -> NDArray[np.float64]:
        arr = np.asarray(values, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < self.a or arr.max() > self.b):
            raise DomainError(f"observations fall outside [{self.a}, {self.b}]")
        u = (arr - self.a) / (self.b - self.a)
        # rounding can push the endpoints a hair past [0, 1]
        return np.clip(u, 0.0, 1.0)


@dataclass(frozen=True)
class BasisFamily:
    kind: BasisKind = "cosine"
    domain: DomainMap = field(default_factory=DomainMap)

    def __post_init__(self):
        if self.kind not in ("cosine", "trigonometric"):
            raise InvalidParameter(f"unknown basis {self.kind!r}; expected cosine or trigonometric")

    def frequency(self, k: int) -> tuple[float, str]:
        """Angular frequency and trig function of e_k (k >= 2)."""
        if self.kind == "cosine":
            return math.pi * (k - 1), "cos"
        return 2.0 * math.pi * (k // 2), "cos" if k % 2 == 0 else "sin"

    def evaluate(self, k: int, u: ArrayLike) -> NDArray[np.float64]:
        if int(k) != k or k < 1:
            raise InvalidParameter(f"basis index must be >= 1, got {k}")
        arr = np.asarray(u, dtype=np.float64)
        if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
            raise DomainError("basis arguments must lie in [0, 1]")
        if k == 1:
            return np.ones_like(arr)
        omega, fn = self.frequency(int(k))
        wave = np.cos(omega * arr) if fn == "cos" else np.sin(omega * arr)
        return _SQRT2 * wave


def basis_eval(basis: BasisFamily, k: int, u: float) -> float:
    return float(basis.evaluate(k, u))


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Basis coefficients <f, e_k>, k = 1..len(values); n = 0 marks exact coefficients."""

    values: NDArray[np.float64]
    n: int
    basis: BasisFamily

    def __len__(self) -> int:
        return len(self.values)

    def head(self, count: int) -> NDArray[np.float64]:
        return self.values[:count]

    def tail(self, start: int) -> NDArray[np.float64]:
        return self.values[start:]
