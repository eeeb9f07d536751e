"""Dynamic weighted sampling over a growing set of items.

A Fenwick (binary indexed) tree stores prefix sums of the weights, so both a
weight update and a draw cost O(log n). The tree kernels are plain numba
functions so the simulation loop can call them without Python overhead.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def fenwick_add(tree, i, delta):
    n = tree.shape[0] - 1
    i += 1
    while i <= n:
        tree[i] += delta
        i += i & -i


@njit(cache=True, nogil=True)
def fenwick_build(tree, weights, size):
    n = tree.shape[0] - 1
    tree[:] = 0.0
    for i in range(size):
        tree[i + 1] = weights[i]
    for i in range(1, n + 1):
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]


@njit(cache=True, nogil=True)
def fenwick_find(tree, target, size):
    """Smallest index whose inclusive prefix sum exceeds ``target``.

    Rounding can push ``target`` past the last live item; the result is then
    clamped to ``size - 1``.
    """
    n = tree.shape[0] - 1
    step = 1
    while step * 2 <= n:
        step *= 2
    pos = 0
    while step > 0:
        nxt = pos + step
        if nxt <= n and tree[nxt] <= target:
            pos = nxt
            target -= tree[nxt]
        step //= 2
    if pos > size - 1:
        pos = size - 1
    return pos


class WeightedSampler:
    """Draw index ``i`` with probability ``w[i] / sum(w)``.

    Weights must be positive. Items are appended with :meth:`append` and
    reweighted with :meth:`update`; the running total is kept incrementally and
    refreshed from scratch by :meth:`recompute`.
    """

    def __init__(self, weights=(), capacity: int = 16):
        weights = np.asarray(weights, dtype=float)
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        capacity = max(capacity, weights.size, 1)
        self._weights = np.zeros(capacity)
        self._weights[: weights.size] = weights
        self._tree = np.zeros(capacity + 1)
        self._size = int(weights.size)
        self.recompute()

    def __len__(self) -> int:
        return self._size

    @property
    def total(self) -> float:
        return self._total

    @property
    def weights(self) -> np.ndarray:
        return self._weights[: self._size].copy()

    def weight(self, i: int) -> float:
        return float(self._weights[i])

    def probabilities(self) -> np.ndarray:
        w = self._weights[: self._size]
        return w / w.sum()

    def recompute(self) -> None:
        fenwick_build(self._tree, self._weights, self._size)
        self._total = float(self._weights[: self._size].sum())

    def _grow(self) -> None:
        capacity = 2 * self._weights.size
        weights = np.zeros(capacity)
        weights[: self._size] = self._weights[: self._size]
        self._weights = weights
        self._tree = np.zeros(capacity + 1)
        self.recompute()

    def append(self, weight: float) -> int:
        if weight <= 0:
            raise ValueError("weights must be positive")
        if self._size == self._weights.size:
            self._grow()
        i = self._size
        self._size += 1
        self._weights[i] = weight
        fenwick_add(self._tree, i, float(weight))
        self._total += weight
        return i

    def update(self, i: int, weight: float) -> None:
        if not 0 <= i < self._size:
            raise IndexError(i)
        if weight <= 0:
            raise ValueError("weights must be positive")
        delta = weight - self._weights[i]
        self._weights[i] = weight
        fenwick_add(self._tree, i, float(delta))
        self._total += delta

    def sample(self, u: float) -> int:
        """Map a uniform draw ``u`` in [0, 1) to an index."""
        if self._size == 0:
            raise IndexError("sample from an empty sampler")
        return int(fenwick_find(self._tree, u * self._total, self._size))

    def draw(self, rng: np.random.Generator, n: int | None = None):
        if n is None:
            return self.sample(rng.random())
        return np.array([self.sample(u) for u in rng.random(n)], dtype=np.int64)
