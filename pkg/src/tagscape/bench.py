"""Exact-DTW vs FastDTW scaling measurement.

The point of the comparison: exact DTW does quadratic work, so doubling
the input length should roughly quadruple its time, while the
multiresolution approximation stays close to linear and its doubling
ratio stays well under 3. Each length gets two untimed warmup runs (the
first allocations at a new size run ~2x slower) and the reported figure
is the median over the timed trials, which shrugs off scheduler stalls.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dtw import dtw_exact, fastdtw


@dataclass(frozen=True, slots=True)
class BenchPoint:
    length: int
    exact_seconds: float  # median per trial
    fast_seconds: float


@dataclass(frozen=True, slots=True)
class BenchReport:
    points: tuple[BenchPoint, ...]
    radius: int
    trials: int

    def doubling_ratios(self, which: str) -> list[float]:
        times = [
            p.exact_seconds if which == "exact" else p.fast_seconds
            for p in self.points
        ]
        return [b / a for a, b in zip(times, times[1:])]

    def table(self) -> str:
        lines = [f"{'length':>8} {'exact_s':>12} {'fastdtw_s':>12}"]
        for p in self.points:
            lines.append(f"{p.length:>8} {p.exact_seconds:>12.5f} {p.fast_seconds:>12.5f}")
        exact = " ".join(f"{r:.2f}x" for r in self.doubling_ratios("exact"))
        fast = " ".join(f"{r:.2f}x" for r in self.doubling_ratios("fast"))
        lines.append(f"doubling ratios  exact: {exact}   fastdtw: {fast}")
        return "\n".join(lines) + "\n"


def run_bench(
    lengths: Sequence[int] = (1000, 2000, 4000),
    trials: int = 5,
    radius: int = 1,
    seed: int = 0,
) -> BenchReport:
    rng = np.random.default_rng(seed)
    # warm the jitted kernels so compilation never lands inside a timing
    warm = rng.integers(0, 2, 16).astype(np.float64)
    dtw_exact(warm, warm)
    fastdtw(warm, warm, radius)

    points = []
    for length in lengths:
        exact_times = []
        fast_times = []
        for trial in range(trials + 2):
            x = rng.integers(0, 2, length).astype(np.float64)
            y = rng.integers(0, 2, length).astype(np.float64)
            t0 = time.perf_counter()
            dtw_exact(x, y)
            t1 = time.perf_counter()
            fastdtw(x, y, radius)
            t2 = time.perf_counter()
            if trial >= 2:  # first two runs at a size pay allocator warmup
                exact_times.append(t1 - t0)
                fast_times.append(t2 - t1)
        points.append(
            BenchPoint(
                length, statistics.median(exact_times), statistics.median(fast_times)
            )
        )
    return BenchReport(points=tuple(points), radius=radius, trials=trials)
