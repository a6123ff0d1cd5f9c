"""Deterministic pairwise summation.

Every inner product and squared norm in the package goes through `pairwise_sum`,
so results do not depend on BLAS blocking or thread scheduling. The reduction
tree is fixed by the length alone: adjacent pairs are added level by level and
an odd tail is padded with an exact zero.
"""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray


def pairwise_sum(values: ArrayLike, axis: int | None = None):
    """Sum `values` with a fixed binary tree.

    With `axis=None` the input is flattened and a float is returned. With an
    axis, every lane along the other axes is reduced with the same tree a 1-D
    call would use, so column results are bit-identical to summing each
    column on its own.
    """
    arr = np.asarray(values, dtype=np.float64)
    if axis is None:
        arr = arr.ravel()
        axis = 0
    arr = np.moveaxis(arr, axis, 0)
    if arr.shape[0] == 0:
        empty = np.zeros(arr.shape[1:], dtype=np.float64)
        return float(empty) if empty.ndim == 0 else empty
    while arr.shape[0] > 1:
        if arr.shape[0] % 2:
            pad = np.zeros((1,) + arr.shape[1:], dtype=np.float64)
            arr = np.concatenate([arr, pad], axis=0)
        arr = arr[0::2] + arr[1::2]
    result = arr[0]
    if np.ndim(result) == 0:
        return float(result)
    return np.ascontiguousarray(result)


def pairwise_dot(x: NDArray[np.float64], y: NDArray[np.float64]) -> float:
    return pairwise_sum(np.multiply(x, y))


def squared_norm(x: NDArray[np.float64]) -> float:
    return pairwise_sum(np.multiply(x, x))


def norm(x: NDArray[np.float64]) -> float:
    return math.sqrt(squared_norm(x))


def mean(x: NDArray[np.float64]) -> float:
    return pairwise_sum(x) / len(x)
