"""Sequence alignment: exact dynamic time warping and its multiresolution
linear-time approximation.

``dtw_exact`` solves the full quadratic dynamic program and doubles as the
oracle for ``fastdtw``, which coarsens the inputs by halving, solves the
coarse problem recursively, projects the coarse warping path back to full
resolution and re-solves inside a radius-expanded corridor. The corridor
search space is a subset of the full one, so the approximate distance can
never undercut the exact optimum.

Per-cell cost is ``|x_i - y_j|``: identical to squared difference on 0/1
inputs, and still meaningful for the fractional values the coarsening step
produces.

Both solvers share one window-constrained kernel (the exact solver just
passes the all-inclusive window), so distances for identical paths are
bit-identical between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.ndimage import maximum_filter1d, minimum_filter1d

Path = tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class AlignmentResult:
    """Cumulative alignment cost and the warping path that attains it.

    The path is 1-based, runs from (1, 1) to (n, m) and moves only by
    (+1, 0), (0, +1) or (+1, +1).
    """

    distance: float
    path: Path


def _as_floats(seq) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("sequences must be one-dimensional")
    if arr.shape[0] == 0:
        raise ValueError("empty sequence")
    return arr


@njit(nogil=True, cache=True)
def _window_dtw(x, y, lo, hi, offsets):  # pragma: no cover - jitted
    # Flat storage: row i occupies offsets[i] .. offsets[i+1]-1 covering
    # columns lo[i] .. hi[i]. Cells outside the window act as +inf.
    # Predecessor codes: 0 diagonal, 1 from (i-1, j), 2 from (i, j-1),
    # -1 start/unreachable. On ties the diagonal wins, then (i-1, j).
    n = x.shape[0]
    total = offsets[n]
    acc = np.empty(total, np.float64)
    pred = np.empty(total, np.int8)
    for i in range(n):
        base = offsets[i]
        left = lo[i]
        right = hi[i]
        for j in range(left, right + 1):
            idx = base + (j - left)
            cost = abs(x[i] - y[j])
            if i == 0 and j == 0:
                acc[idx] = cost
                pred[idx] = -1
                continue
            best = np.inf
            code = -1
            if i > 0:
                pl = lo[i - 1]
                ph = hi[i - 1]
                pbase = offsets[i - 1]
                if pl <= j - 1 <= ph:
                    v = acc[pbase + (j - 1 - pl)]
                    if v < best:
                        best = v
                        code = 0
                if pl <= j <= ph:
                    v = acc[pbase + (j - pl)]
                    if v < best:
                        best = v
                        code = 1
            if j - 1 >= left:
                v = acc[idx - 1]
                if v < best:
                    best = v
                    code = 2
            if code == -1:
                acc[idx] = np.inf
            else:
                acc[idx] = cost + best
            pred[idx] = code
    return acc, pred


def _solve_window(
    x: np.ndarray, y: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> AlignmentResult:
    n, m = x.shape[0], y.shape[0]
    widths = hi - lo + 1
    offsets = np.zeros(n + 1, np.int64)
    np.cumsum(widths, out=offsets[1:])
    acc, pred = _window_dtw(x, y, lo, hi, offsets)

    i, j = n - 1, m - 1
    idx = offsets[i] + (j - lo[i])
    distance = float(acc[idx])
    steps = [(i + 1, j + 1)]
    while not (i == 0 and j == 0):
        code = pred[idx]
        if code == 0:
            i, j = i - 1, j - 1
        elif code == 1:
            i = i - 1
        elif code == 2:
            j = j - 1
        else:  # unreachable end cell: malformed window
            raise RuntimeError("no warping path inside window")
        idx = offsets[i] + (j - lo[i])
        steps.append((i + 1, j + 1))
    steps.reverse()
    return AlignmentResult(distance=distance, path=tuple(steps))


def dtw_exact(x, y) -> AlignmentResult:
    """Globally optimal alignment of two real sequences (O(n*m))."""
    xa, ya = _as_floats(x), _as_floats(y)
    n, m = xa.shape[0], ya.shape[0]
    lo = np.zeros(n, np.int64)
    hi = np.full(n, m - 1, np.int64)
    return _solve_window(xa, ya, lo, hi)


def _halve(arr: np.ndarray) -> np.ndarray:
    # Average adjacent pairs; an odd trailing element passes through as is.
    even = arr.shape[0] // 2 * 2
    halved = (arr[0:even:2] + arr[1:even:2]) / 2.0
    if arr.shape[0] % 2:
        return np.concatenate([halved, arr[-1:]])
    return halved


def _project_window(
    coarse_path: Path, n: int, m: int, radius: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row column bounds of the coarse path doubled to fine resolution,
    then dilated by ``radius`` in both directions (Chebyshev ball)."""
    lo = np.full(n, m, np.int64)
    hi = np.full(n, -1, np.int64)
    for ci, cj in coarse_path:
        fi0 = 2 * (ci - 1)
        fj0 = 2 * (cj - 1)
        fj1 = min(fj0 + 1, m - 1)
        for fi in (fi0, fi0 + 1):
            if fi < n:
                if fj0 < lo[fi]:
                    lo[fi] = fj0
                if fj1 > hi[fi]:
                    hi[fi] = fj1
    if radius > 0:
        size = 2 * radius + 1
        lo = minimum_filter1d(lo, size, mode="nearest") - radius
        hi = maximum_filter1d(hi, size, mode="nearest") + radius
    np.clip(lo, 0, m - 1, out=lo)
    np.clip(hi, 0, m - 1, out=hi)
    return lo, hi


def fastdtw(x, y, radius: int = 1) -> AlignmentResult:
    """Approximate alignment in linear time and space.

    ``radius`` widens the refinement corridor; at ``radius >=
    max(len(x), len(y))`` the recursion bottoms out immediately and the
    result equals ``dtw_exact``. The returned distance is always >= the
    exact optimum.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    xa, ya = _as_floats(x), _as_floats(y)
    return _fastdtw_rec(xa, ya, radius)


def _fastdtw_rec(x: np.ndarray, y: np.ndarray, radius: int) -> AlignmentResult:
    n, m = x.shape[0], y.shape[0]
    if n <= radius + 2 or m <= radius + 2:
        return dtw_exact(x, y)
    coarse = _fastdtw_rec(_halve(x), _halve(y), radius)
    lo, hi = _project_window(coarse.path, n, m, radius)
    return _solve_window(x, y, lo, hi)
