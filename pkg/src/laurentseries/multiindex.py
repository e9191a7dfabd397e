"""Multi-indices in Z^n, boxes Q_N and the shell enumeration sigma.

Multi-indices are plain tuples of ints.  The enumeration lists Q_0, then
Q_1 \\ Q_0, then Q_2 \\ Q_1, ..., each shell in lexicographic order, so that
the first (2N+1)^n indices are exactly Q_N.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

MultiIndex = tuple[int, ...]


def linf_norm(alpha: Sequence[int]) -> int:
    """Box norm max_j |alpha_j| (0 for the empty index)."""
    return max((abs(int(a)) for a in alpha), default=0)


def length(alpha: Sequence[int]) -> int:
    """Total degree [alpha] = sum of the entries."""
    return sum(int(a) for a in alpha)


def box_size(N: int, n: int) -> int:
    return (2 * N + 1) ** n if N >= 0 else 0


def shell_size(N: int, n: int) -> int:
    return box_size(N, n) - box_size(N - 1, n)


def _box_array(N: int, n: int) -> np.ndarray:
    # Lexicographic product grid, then stable sort by box norm: shell order
    # with lexicographic order inside every shell.
    axis = np.arange(-N, N + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    norms = np.abs(grid).max(axis=1)
    return grid[np.argsort(norms, kind="stable")]


def box_points(N: int, n: int) -> list[MultiIndex]:
    """All alpha with |alpha|_inf <= N in sigma order; (2N+1)^n entries."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return [tuple(int(v) for v in row) for row in _default(n).prefix(box_size(N, n))]


def shell_points(N: int, n: int) -> list[MultiIndex]:
    """Q_N \\ Q_{N-1} in lexicographic order."""
    return box_points(N, n)[box_size(N - 1, n):]


class BoxShellEnumeration:
    """Lazily extended table of sigma(0), sigma(1), ... for a fixed dimension.

    The cache only grows.  Growth happens under a lock; reads after growth
    see an immutable array, so a warmed instance is safe to share.
    """

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self._N = -1
        self._table = np.zeros((0, dimension), dtype=np.int64)
        self._lock = threading.Lock()

    @property
    def cached_box(self) -> int:
        return self._N

    def ensure_box(self, N: int) -> None:
        if N <= self._N:
            return
        with self._lock:
            if N > self._N:
                # grow geometrically so repeated single-step requests stay cheap
                target = max(N, 2 * self._N + 1)
                self._table = _box_array(target, self.dimension)
                self._table.setflags(write=False)
                self._N = target

    def prefix(self, count: int) -> np.ndarray:
        """sigma(0..count-1) as an int array of shape (count, n)."""
        if count > box_size(self._N, self.dimension):
            # smallest N with |Q_N| >= count
            N = box_index_bound(count, self.dimension)
            if box_size(N, self.dimension) < count:
                N += 1
            self.ensure_box(N)
        return self._table[:count]

    def __call__(self, j: int) -> MultiIndex:
        if j < 0:
            raise ValueError("sigma is defined on nonnegative integers")
        return tuple(int(v) for v in self.prefix(j + 1)[j])

    def inverse(self, alpha: Sequence[int]) -> int:
        return sigma_inverse(alpha)


_ENUMERATIONS: dict[int, BoxShellEnumeration] = {}


def _default(n: int) -> BoxShellEnumeration:
    enum = _ENUMERATIONS.get(n)
    if enum is None:
        enum = _ENUMERATIONS.setdefault(n, BoxShellEnumeration(n))
    return enum


def sigma(j: int, n: int) -> MultiIndex:
    """The j-th multi-index of the shell enumeration of Z^n."""
    return _default(n)(j)


def sigma_inverse(alpha: Sequence[int]) -> int:
    """Position of alpha in the shell enumeration.

    Computed by counting, without touching the cache: the shell offset
    (2N-1)^n plus the number of lexicographically smaller shell members.
    """
    alpha = tuple(int(a) for a in alpha)
    n = len(alpha)
    N = linf_norm(alpha)
    if N == 0:
        return 0
    rank = 0
    hit = False  # prefix already contains an entry of modulus N
    for i, a in enumerate(alpha):
        rest = n - i - 1
        full = (2 * N + 1) ** rest
        inner = (2 * N - 1) ** rest
        for v in range(-N, a):
            rank += full if (hit or abs(v) == N) else full - inner
        hit = hit or abs(a) == N
    return box_size(N - 1, n) + rank


def box_index_bound(M: int, n: int) -> int:
    """Largest M1 with (2*M1 + 1)^n <= M, by exact integer search."""
    if M < 1:
        raise ValueError("M must be >= 1")
    lo, hi = 0, 1
    while (2 * hi + 1) ** n <= M:
        hi *= 2
    # invariant: (2lo+1)^n <= M < (2hi+1)^n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (2 * mid + 1) ** n <= M:
            lo = mid
        else:
            hi = mid
    return lo


def sigma_order(indices: Iterable[Sequence[int]]) -> list[MultiIndex]:
    """Sort distinct multi-indices by their sigma position."""
    return sorted({tuple(int(a) for a in alpha) for alpha in indices}, key=sigma_inverse)


def falling_factorial(a: int, g: int) -> int:
    """a (a-1) ... (a-g+1); equal to 1 for g = 0."""
    out = 1
    for t in range(g):
        out *= a - t
    return out


def nonnegative_indices(n: int, max_entry: int) -> list[MultiIndex]:
    """All gamma in N^n with gamma_j <= max_entry, lexicographic."""
    grid = np.stack(np.meshgrid(*([np.arange(max_entry + 1)] * n), indexing="ij"), axis=-1)
    return [tuple(int(v) for v in row) for row in grid.reshape(-1, n)]


def total_degree_indices(n: int, k: int) -> list[MultiIndex]:
    """All gamma in N^n with [gamma] <= k."""
    return [g for g in nonnegative_indices(n, k) if sum(g) <= k]
