"""Point sets, exact star discrepancy, and a piecewise-linear function engine.

The central object is :class:`PiecewiseLinearFn`, a left-continuous piecewise
linear function on [0, 1] with jump discontinuities at breakpoints.  The
discrepancy function of a point-set prefix is represented exactly in this form,
and envelope arithmetic (pointwise max/min, sums, differences) stays exact
because all operations resolve to affine pieces on a merged breakpoint grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PointSet",
    "PiecewiseLinearFn",
    "make_point_set",
    "counting_function",
    "discrepancy_function",
    "star_discrepancy",
    "plf_integral_abs",
    "plf_range_integral",
    "read_point_file",
    "write_point_file",
]

# breakpoint coordinates coming from the same float source compare exactly;
# everything derived through arithmetic is compared at this tolerance
TOL = 1e-12


@dataclass(frozen=True)
class PointSet:
    """Finite ordered sequence of reals in [0, 1).

    Order matters: the first n entries define the length-n prefix used by
    counting and discrepancy functions.
    """

    points: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


def make_point_set(values: Sequence[float] | Iterable[float]) -> PointSet:
    """Validate and wrap a sequence of reals as a PointSet.

    Rejects empty input and any value outside [0, 1), naming the offending
    index.
    """
    vals = tuple(float(v) for v in values)
    if not vals:
        raise ValueError("point set must contain at least one value")
    for i, v in enumerate(vals):
        if not (0.0 <= v < 1.0):
            raise ValueError(f"point at index {i} outside [0, 1): {v!r}")
    return PointSet(vals)


def read_point_file(path: str | Path) -> PointSet:
    """Read one real per line; '#' starts a comment, blank lines ignored."""
    vals: list[float] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(float(line))
        except ValueError as exc:
            raise ValueError(f"unparseable point value {line!r} in {path}") from exc
    return make_point_set(vals)


def write_point_file(ps: PointSet, path: str | Path) -> None:
    Path(path).write_text("".join(f"{v!r}\n" for v in ps.points))


def counting_function(ps: PointSet, n: int, x: float) -> int:
    """#{i <= n : x_i < x}, the strict-inequality counting function."""
    if not 1 <= n <= len(ps):
        raise ValueError(f"prefix length n={n} out of range 1..{len(ps)}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"evaluation point x={x} outside [0, 1]")
    prefix = ps.values[:n]
    return int(np.count_nonzero(prefix < x))


class PiecewiseLinearFn:
    """Left-continuous piecewise-linear function on [0, 1].

    Representation: breakpoints ``b_0 = 0 < b_1 < ... < b_m = 1``; one slope
    per segment ``(b_{k-1}, b_k]``; one jump per breakpoint ``b_0 .. b_{m-1}``
    acting strictly to the right of it (a jump stored at 0 models points
    sitting at the origin); the value at 0 (``anchor``).  The value at any
    breakpoint is the left limit.

    The constructor validates structure only.  Jump *sign* is a semantic
    property of admissible functions and is checked by the property checkers,
    so functions violating it remain constructible as counterexamples.
    """

    __slots__ = ("breakpoints", "slopes", "jumps", "anchor", "_left_values")

    def __init__(
        self,
        breakpoints: Sequence[float],
        slopes: Sequence[float],
        jumps: Sequence[float],
        anchor: float,
    ) -> None:
        bp = np.asarray(breakpoints, dtype=float)
        sl = np.asarray(slopes, dtype=float)
        jp = np.asarray(jumps, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("need at least breakpoints [0, 1]")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        m = bp.size - 1
        if sl.size != m:
            raise ValueError(f"expected {m} segment slopes, got {sl.size}")
        if jp.size != m:
            raise ValueError(f"expected {m} jumps (one per breakpoint below 1), got {jp.size}")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(sl)) and np.all(np.isfinite(jp)) and math.isfinite(anchor)):
            raise ValueError("non-finite data in piecewise-linear function")
        self.breakpoints = bp
        self.slopes = sl
        self.jumps = jp
        self.anchor = float(anchor)
        # left-limit values at every breakpoint, cumulative over segments
        vals = np.empty(m + 1)
        vals[0] = anchor
        np.cumsum(jp + sl * np.diff(bp), out=vals[1:])
        vals[1:] += anchor
        self._left_values = vals

    # -- basic accessors -------------------------------------------------

    @property
    def left_values(self) -> np.ndarray:
        """f(b_k) for every breakpoint (left limits)."""
        return self._left_values

    def right_limit(self, k: int) -> float:
        """Limit of f from the right at breakpoint index k (k < m)."""
        return float(self._left_values[k] + self.jumps[k])

    def value(self, x: float) -> float:
        """Evaluate with the left-continuity convention."""
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"evaluation point x={x} outside [0, 1]")
        bp = self.breakpoints
        if x == 0.0:
            return self.anchor
        # segment index k such that b_{k-1} < x <= b_k
        k = int(np.searchsorted(bp, x, side="left"))
        return float(
            self._left_values[k - 1]
            + self.jumps[k - 1]
            + self.slopes[k - 1] * (x - bp[k - 1])
        )

    def __call__(self, x: float) -> float:
        return self.value(x)

    def jump_at(self, x: float) -> float:
        """Jump height at x (0.0 if x is not a stored breakpoint below 1)."""
        k = int(np.searchsorted(self.breakpoints, x, side="left"))
        if k < self.jumps.size and self.breakpoints[k] == x:
            return float(self.jumps[k])
        return 0.0

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "PiecewiseLinearFn":
        return cls([0.0, 1.0], [0.0], [0.0], 0.0)

    # -- arithmetic ------------------------------------------------------

    def _resample(self, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(left values, right limits, slopes) of self on a superset grid.

        ``grid`` must contain all of self's breakpoints plus possibly more;
        returns arrays aligned with grid (slopes per segment).
        """
        bp = self.breakpoints
        idx = np.searchsorted(bp, grid, side="left")
        own = (idx < bp.size) & (bp[np.minimum(idx, bp.size - 1)] == grid)
        # segment of self containing each grid point (for interpolation)
        seg = np.clip(np.searchsorted(bp, grid, side="left"), 1, bp.size - 1)
        left = self._left_values[seg - 1] + self.jumps[seg - 1] + self.slopes[seg - 1] * (grid - bp[seg - 1])
        left[own] = self._left_values[idx[own]]
        left[0] = self.anchor
        jumps = np.zeros(grid.size)
        jumps[own & (grid < 1.0)] = self.jumps[idx[own & (grid < 1.0)]]
        right = left + jumps
        # slope on (grid[k-1], grid[k]] is self's slope of the covering segment
        segs = np.clip(np.searchsorted(bp, grid[1:], side="left"), 1, bp.size - 1)
        slopes = self.slopes[segs - 1]
        return left, right, slopes

    def _binary(self, other: "PiecewiseLinearFn", op: str) -> "PiecewiseLinearFn":
        grid = np.unique(np.concatenate([self.breakpoints, other.breakpoints]))
        if op in ("max", "min"):
            # insert strict interior crossings so each segment is one branch
            fl, fr, fs = self._resample(grid)
            gl, gr, gs = other._resample(grid)
            d0 = fr[:-1] - gr[:-1]
            d1 = fl[1:] - gl[1:]
            cross = np.flatnonzero((d0 > 0) != (d1 > 0))
            cross = cross[(d0[cross] != 0.0) & (d1[cross] != 0.0)]
            if cross.size:
                u, v = grid[cross], grid[cross + 1]
                xc = u + d0[cross] * (v - u) / (d0[cross] - d1[cross])
                keep = (xc > u) & (xc < v)
                grid = np.unique(np.concatenate([grid, xc[keep]]))
        fl, fr, fs = self._resample(grid)
        gl, gr, gs = other._resample(grid)
        if op == "add":
            left, right, slopes = fl + gl, fr + gr, fs + gs
        elif op == "sub":
            left, right, slopes = fl - gl, fr - gr, fs - gs
        else:
            pick = np.maximum if op == "max" else np.minimum
            left, right = pick(fl, gl), pick(fr, gr)
            # branch taken on each segment decides the slope: compare midpoints
            mid_f = fr[:-1] + fs * (np.diff(grid) / 2)
            mid_g = gr[:-1] + gs * (np.diff(grid) / 2)
            take_f = mid_f >= mid_g if op == "max" else mid_f <= mid_g
            slopes = np.where(take_f, fs, gs)
        jumps = (right - left)[:-1]
        return PiecewiseLinearFn(grid, slopes, jumps, float(left[0]))

    def __add__(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        return self._binary(other, "add")

    def __sub__(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        return self._binary(other, "sub")

    def maximum(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        return self._binary(other, "max")

    def minimum(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        return self._binary(other, "min")

    # -- integrals -------------------------------------------------------

    def integral(self) -> float:
        """Exact signed integral over [0, 1]."""
        w = np.diff(self.breakpoints)
        y0 = self._left_values[:-1] + self.jumps  # value entering each segment
        y1 = self._left_values[1:]
        return float(np.sum(0.5 * (y0 + y1) * w))

    def integral_abs(self) -> float:
        """Exact integral of |f| with zero-crossing splits inside segments."""
        w = np.diff(self.breakpoints)
        y0 = self._left_values[:-1] + self.jumps
        y1 = self._left_values[1:]
        same = y0 * y1 >= 0.0
        areas = np.where(
            same,
            0.5 * np.abs(y0 + y1) * w,
            # affine sign change: two triangles meeting at the interior zero
            0.5 * (y0 * y0 + y1 * y1) * w / np.where(same, 1.0, np.abs(y1 - y0)),
        )
        return float(np.sum(areas))


def discrepancy_function(ps: PointSet, n: int) -> PiecewiseLinearFn:
    """D_n(x) = #{i <= n : x_i < x} - n*x as an exact PiecewiseLinearFn.

    Slope -n everywhere, a unit jump at each prefix point (heights summed at
    coincident values), value at a jump point equal to the left limit.
    """
    if not 1 <= n <= len(ps):
        raise ValueError(f"prefix length n={n} out of range 1..{len(ps)}")
    locs, counts = np.unique(ps.values[:n], return_counts=True)
    interior = locs > 0.0
    bp = np.concatenate([[0.0], locs[interior], [1.0]])
    jumps = np.zeros(bp.size - 1)
    jumps[0] = counts[~interior].sum() if np.any(~interior) else 0.0
    jumps[1:] = counts[interior]
    slopes = np.full(bp.size - 1, -float(n))
    return PiecewiseLinearFn(bp, slopes, jumps, 0.0)


def star_discrepancy(ps: PointSet, n: int | None = None) -> float:
    """Exact D*_n via the sorted-points closed form.

    With the sorted prefix y_1 <= ... <= y_n,
    D*_n = max_i max(i/n - y_i, y_i - (i-1)/n); the result lies in
    [1/(2n), 1].
    """
    if n is None:
        n = len(ps)
    if not 1 <= n <= len(ps):
        raise ValueError(f"prefix length n={n} out of range 1..{len(ps)}")
    y = np.sort(ps.values[:n])
    i = np.arange(1, n + 1, dtype=float)
    return float(np.max(np.maximum(i / n - y, y - (i - 1) / n)))


def plf_integral_abs(g: PiecewiseLinearFn) -> float:
    """Exact integral of |g| over [0, 1]."""
    return g.integral_abs()


def plf_range_integral(ps: PointSet) -> float:
    """Integral of the spread between the extreme discrepancy profiles.

    Computes the upper minus the lower envelope of {D_n : 0 <= n <= N}
    (the empty prefix contributes the zero function) and integrates the
    difference exactly.
    """
    members = [PiecewiseLinearFn.zero()]
    members += [discrepancy_function(ps, n) for n in range(1, len(ps) + 1)]
    upper = members[0]
    lower = members[0]
    for m in members[1:]:
        upper = upper.maximum(m)
        lower = lower.minimum(m)
    return (upper - lower).integral()
