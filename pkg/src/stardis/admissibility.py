"""Two-scale comparison functions and their admissibility checks.

Given a prefix of length N = floor(a^t), the index range splits into the first
block A0, the last block A2 (both of size floor(a^{t-1})), and the middle A1.
The comparison function is

    f(x) = max_{n in A2} D_n(x) - max_{n in A0} D_n(x),

a piecewise-linear function with nonnegative jumps, steep negative slopes, and
unit jumps at the middle-block points.  This module builds f exactly and
verifies the structural properties that make it a member of the admissible
family, including the slope-threshold/back-line ("bend") condition and the
strict variant with an explicit jump-location set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .plf import PiecewiseLinearFn, PointSet, discrepancy_function

__all__ = [
    "ScaleParams",
    "GammaSets",
    "Violation",
    "PropertyReport",
    "make_scale",
    "build_f",
    "check_properties",
    "check_bend_condition",
    "check_strict_admissibility",
    "gamma_sets_from_points",
]

TOL = 1e-12
JUMP_TOL = 1e-9  # unit-height jumps survive envelope arithmetic to ~1e-15


@dataclass(frozen=True)
class ScaleParams:
    """Scale (a, t) with the derived index partition and slope threshold.

    s0 = -a^{t-1}(a-2) is negative; abs_s0 is its magnitude.  integer_exact
    marks a = 3, where a^t and a^{t-1} are exact integers and the full
    property checks apply.
    """

    a: float
    t: int
    N: int
    n0: int
    s0: float
    abs_s0: float
    integer_exact: bool

    @property
    def A0(self) -> range:
        return range(1, self.n0 + 1)

    @property
    def A1(self) -> range:
        return range(self.n0 + 1, self.N - self.n0 + 1)

    @property
    def A2(self) -> range:
        return range(self.N - self.n0 + 1, self.N + 1)


def make_scale(a: float, t: int) -> ScaleParams:
    """Build ScaleParams for 3 <= a <= 3.7 and integer t >= 1."""
    a = float(a)
    if not 3.0 <= a <= 3.7:
        raise ValueError(f"scale base a={a} outside [3, 3.7]")
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise ValueError(f"scale exponent t={t} must be a positive integer")
    t = int(t)
    N = math.floor(a**t)
    n0 = math.floor(a ** (t - 1))
    abs_s0 = a ** (t - 1) * (a - 2.0)
    sc = ScaleParams(a, t, N, n0, -abs_s0, abs_s0, integer_exact=(a == 3.0))
    if 2 * n0 >= N:
        raise ValueError(f"degenerate partition at (a={a}, t={t})")
    return sc


@dataclass(frozen=True)
class Violation:
    """First witness of a failed property: location, measured value, threshold."""

    where: float
    measured: float
    threshold: float
    note: str = ""


@dataclass
class PropertyReport:
    """Per-property pass/fail with the first violation witness for each."""

    entries: list[tuple[str, bool, Violation | None]] = field(default_factory=list)

    def add(self, prop: str, ok: bool, witness: Violation | None = None) -> None:
        self.entries.append((prop, bool(ok), None if ok else witness))

    @property
    def all_ok(self) -> bool:
        return all(ok for _, ok, _ in self.entries)

    def passed(self, prop: str) -> bool:
        for name, ok, _ in self.entries:
            if name == prop:
                return ok
        raise KeyError(prop)

    def witness(self, prop: str) -> Violation | None:
        for name, ok, w in self.entries:
            if name == prop:
                return w
        raise KeyError(prop)

    def lines(self) -> list[str]:
        out = []
        for name, ok, w in self.entries:
            if ok:
                out.append(f"{name}: pass")
            elif w is None:
                out.append(f"{name}: FAIL")
            else:
                extra = f" ({w.note})" if w.note else ""
                out.append(
                    f"{name}: FAIL at x={w.where:.9g}, measured {w.measured:.9g}"
                    f" vs threshold {w.threshold:.9g}{extra}"
                )
        return out


def _envelope_max(ps: PointSet, indices: range) -> PiecewiseLinearFn:
    env: PiecewiseLinearFn | None = None
    for n in indices:
        d = discrepancy_function(ps, n)
        env = d if env is None else env.maximum(d)
    assert env is not None
    return env


def build_f(ps: PointSet, sc: ScaleParams) -> PiecewiseLinearFn:
    """Upper envelope over A2 minus upper envelope over A0, exactly."""
    if len(ps) != sc.N:
        raise ValueError(f"point set has {len(ps)} points, scale needs N={sc.N}")
    return _envelope_max(ps, sc.A2) - _envelope_max(ps, sc.A0)


def check_properties(f: PiecewiseLinearFn, sc: ScaleParams, ps: PointSet) -> PropertyReport:
    """Check structural properties (i)-(vi); reports, never raises.

    (i) endpoint zeros; (ii) |f| <= a^t; (iii) every jump nonnegative;
    (iv) slopes within [-a^t, s0]; (v) slope changes across jump-free
    breakpoints at most a^{t-1}; (vi) jump height >= 1 at each middle-block
    point.
    """
    rep = PropertyReport()
    at = sc.a**sc.t
    at1 = sc.a ** (sc.t - 1)
    bp = f.breakpoints
    left = f.left_values
    right = left[:-1] + f.jumps

    # (i) zeros at both ends
    if abs(f.anchor) > TOL:
        rep.add("i", False, Violation(0.0, f.anchor, 0.0, "f(0) != 0"))
    elif abs(left[-1]) > TOL:
        rep.add("i", False, Violation(1.0, float(left[-1]), 0.0, "f(1) != 0"))
    else:
        rep.add("i", True)

    # (ii) bounded by a^t; extremes of a PLF sit at segment endpoint limits
    mags = np.maximum(np.abs(left), np.concatenate([np.abs(right), [0.0]]))
    k = int(np.argmax(mags))
    rep.add(
        "ii",
        mags[k] <= at + JUMP_TOL,
        Violation(float(bp[k]), float(mags[k]), at),
    )

    # (iii) no negative jump
    k = int(np.argmin(f.jumps))
    rep.add(
        "iii",
        f.jumps[k] >= -TOL,
        Violation(float(bp[k]), float(f.jumps[k]), 0.0),
    )

    # (iv) slopes within [-a^t, s0]
    sl = f.slopes
    bad = (sl < -at - JUMP_TOL) | (sl > sc.s0 + JUMP_TOL)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        rep.add("iv", False, Violation(float(bp[k + 1]), float(sl[k]), sc.s0, f"range [{-at:g}, {sc.s0:g}]"))
    else:
        rep.add("iv", True)

    # (v) consecutive slopes differ by at most a^{t-1} across jump-free breakpoints
    smooth = np.abs(f.jumps[1:]) <= TOL
    diffs = np.abs(np.diff(sl))
    bad = smooth & (diffs > at1 + JUMP_TOL)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        rep.add("v", False, Violation(float(bp[k + 1]), float(diffs[k]), at1))
    else:
        rep.add("v", True)

    # (vi) unit jumps at middle-block points
    ok_vi: tuple[bool, Violation | None] = (True, None)
    for i in sc.A1:
        if i > len(ps):
            break
        x = ps.points[i - 1]
        h = f.jump_at(x)
        if h < 1.0 - JUMP_TOL:
            ok_vi = (False, Violation(x, h, 1.0, f"point index {i}"))
            break
    rep.add("vi", ok_vi[0], ok_vi[1])
    return rep


def _probe_values(f: PiecewiseLinearFn, lo: float, hi: float) -> list[tuple[float, float]]:
    """(x, limit-value) probes covering every affine piece of f on (lo, hi).

    Probes are segment endpoint limits (right limits entered via jump
    addition) plus midpoints; exact for affine pieces.  Boundary values are
    limits from inside the interval, so a jump sitting exactly at lo or hi
    does not leak in: the dominance claims being checked hold pointwise on
    the open interval and extend to its ends only by one-sided limits.
    """
    bp = f.breakpoints
    cuts = [lo] + [float(b) for b in bp if lo < b < hi] + [hi]
    probes: list[tuple[float, float]] = []
    for u, v in zip(cuts[:-1], cuts[1:]):
        fu = f.value(u)
        probes.append((u, fu + f.jump_at(u)))  # limit from the right at u
        probes.append(((u + v) / 2, f.value((u + v) / 2)))
        probes.append((v, f.value(v)))  # limit from the left at v
    return probes


def _firing_probes(
    f: PiecewiseLinearFn, lo: float, hi: float, threshold: float
) -> list[tuple[float, float]]:
    """Probes on (lo, hi) restricted to segments whose slope exceeds threshold."""
    bp = f.breakpoints
    probes: list[tuple[float, float]] = []
    for k in range(f.slopes.size):
        u, v = float(bp[k]), float(bp[k + 1])
        a, b = max(u, lo), min(v, hi)
        if a >= b:
            continue
        if f.slopes[k] <= threshold + JUMP_TOL:  # ties do not fire
            continue
        fa = f.value(a) + f.jump_at(a)
        probes.append((a, fa))
        probes.append(((a + b) / 2, f.value((a + b) / 2)))
        probes.append((b, f.value(b)))
    return probes


def _backline_check(
    f: PiecewiseLinearFn,
    lo: float,
    jump_x: float,
    hi: float,
    threshold: float,
    s0: float,
) -> tuple[bool, bool, Violation | None]:
    """Back-line dominance test around a jump at jump_x.

    If any point of (jump_x, hi) lies on a segment with slope above
    ``threshold``, then every point of [lo, jump_x) must dominate the line of
    slope s0 drawn back from it:  f(x) >= f(xbar) - s0*(xbar - x).  The value
    at lo is read as the limit from the right: a jump at the neighbor point
    itself belongs to the stretch left of it, not to this one.
    Returns (ok, fired, witness).
    """
    firing = _firing_probes(f, jump_x, hi, threshold)
    if not firing:
        return True, False, None
    xbar, fbar = max(firing, key=lambda p: p[1] - s0 * p[0])
    rhs = fbar - s0 * xbar
    lhs_probes = _probe_values(f, lo, jump_x)
    xlow, flow = min(lhs_probes, key=lambda p: p[1] - s0 * p[0])
    lhs = flow - s0 * xlow
    if lhs >= rhs - JUMP_TOL:
        return True, True, None
    required = fbar - s0 * (xbar - xlow)
    return False, True, Violation(
        xlow, flow, required, f"back line from xbar={xbar:.9g}"
    )


def check_bend_condition(
    f: PiecewiseLinearFn, sc: ScaleParams, ps: PointSet, j: int
) -> PropertyReport:
    """Back-line dominance at the j-th point, j in the last index block.

    With k = j - (N - n0), 1 <= k < n0: if the slope anywhere strictly between
    x_j and its next distinct neighbor value exceeds s0 - k, the function on
    [previous neighbor value, x_j) must dominate the s0-line drawn back from
    that location.  Vacuously true when no slope fires or when x_j has no
    distinct neighbor value on one side.
    """
    k = j - (sc.N - sc.n0)
    if not 1 <= k < sc.n0:
        raise ValueError(
            f"index j={j} outside the eligible last block "
            f"{{{sc.N - sc.n0 + 1}, ..., {sc.N - 1}}}"
        )
    if j > len(ps):
        raise ValueError(f"index j={j} exceeds point count {len(ps)}")
    xj = ps.points[j - 1]
    if f.jump_at(xj) <= JUMP_TOL:
        raise ValueError(f"no discontinuity at x_{j}={xj!r}")
    rep = PropertyReport()
    prop = f"bend[j={j}]"
    vals = np.unique(ps.values)
    p = int(np.searchsorted(vals, xj))
    if p == 0 or p == vals.size - 1:
        # no distinct neighbor value on one side: nothing to test
        rep.add(prop, True)
        return rep
    xl, xr = float(vals[p - 1]), float(vals[p + 1])
    ok, _fired, witness = _backline_check(f, xl, xj, xr, sc.s0 - k, sc.s0)
    rep.add(prop, ok, witness)
    return rep


@dataclass(frozen=True)
class GammaSets:
    """Jump-location structure for strict admissibility.

    ``gamma`` holds the a^t - 1 candidate jump locations; ``gamma1`` the
    unit-jump subset of size a^t - 2*a^{t-1}; ``gamma2`` the ordered tuple of
    a^{t-1} - 1 back-line locations (the n-th entry carries threshold
    s0 - n); ``gamma0`` is the remainder.
    """

    gamma: frozenset[float]
    gamma1: frozenset[float]
    gamma2: tuple[float, ...]

    @property
    def gamma0(self) -> frozenset[float]:
        return self.gamma - self.gamma1 - frozenset(self.gamma2)


def gamma_sets_from_points(ps: PointSet, sc: ScaleParams) -> GammaSets:
    """Canonical jump-location sets of the comparison function of ps.

    gamma = all point values except the first point; gamma1 = middle-block
    values; gamma2 = last-block values below the final index, ordered by
    index.  Requires pairwise distinct values so the cardinalities are exact.
    """
    if len(ps) != sc.N:
        raise ValueError(f"point set has {len(ps)} points, scale needs N={sc.N}")
    if not sc.integer_exact:
        raise ValueError("canonical jump-location sets need an integer-exact scale (a=3)")
    if len(set(ps.points)) != sc.N:
        raise ValueError("point values must be pairwise distinct")
    gamma = frozenset(ps.points[1:])
    gamma1 = frozenset(ps.points[i - 1] for i in sc.A1)
    gamma2 = tuple(ps.points[i - 1] for i in range(sc.N - sc.n0 + 1, sc.N))
    return GammaSets(gamma, gamma1, gamma2)


def check_strict_admissibility(
    g: PiecewiseLinearFn, sc: ScaleParams, gs: GammaSets
) -> PropertyReport:
    """Clauses of the strict jump-location property.

    a) every actual jump of g sits at a location in gamma;
    b) g jumps by at least 1 at every gamma1 location;
    c) for the n-th gamma2 location, the back-line test with threshold
       s0 - n, neighbors taken within gamma plus the interval ends.
    """
    if not sc.integer_exact:
        raise ValueError("strict admissibility checks need an integer-exact scale (a=3)")
    n_total = round(sc.a**sc.t) - 1
    n_unit = round(sc.a**sc.t) - 2 * sc.n0
    n_back = sc.n0 - 1
    if len(gs.gamma) != n_total:
        raise ValueError(f"gamma must have {n_total} locations, got {len(gs.gamma)}")
    if len(gs.gamma1) != n_unit or not gs.gamma1 <= gs.gamma:
        raise ValueError(f"gamma1 must be {n_unit} locations inside gamma")
    if len(gs.gamma2) != n_back or not frozenset(gs.gamma2) <= gs.gamma:
        raise ValueError(f"gamma2 must be {n_back} locations inside gamma")
    if gs.gamma1 & frozenset(gs.gamma2):
        raise ValueError("gamma1 and gamma2 must be disjoint")

    rep = PropertyReport()
    sorted_gamma = np.array(sorted(gs.gamma))

    ok_a: tuple[bool, Violation | None] = (True, None)
    for k in range(g.jumps.size):
        if g.jumps[k] > JUMP_TOL:
            x = float(g.breakpoints[k])
            p = int(np.searchsorted(sorted_gamma, x))
            hit = (p < sorted_gamma.size and abs(sorted_gamma[p] - x) <= TOL) or (
                p > 0 and abs(sorted_gamma[p - 1] - x) <= TOL
            )
            if not hit:
                ok_a = (False, Violation(x, float(g.jumps[k]), 0.0, "jump outside gamma"))
                break
    rep.add("a", ok_a[0], ok_a[1])

    ok_b: tuple[bool, Violation | None] = (True, None)
    for x in sorted(gs.gamma1):
        h = g.jump_at(x)
        if h < 1.0 - JUMP_TOL:
            ok_b = (False, Violation(x, h, 1.0))
            break
    rep.add("b", ok_b[0], ok_b[1])

    ok_c: tuple[bool, Violation | None] = (True, None)
    fence = np.unique(np.concatenate([sorted_gamma, [0.0, 1.0]]))
    for n, xi in enumerate(gs.gamma2, start=1):
        p = int(np.searchsorted(fence, xi))
        lo = float(fence[p - 1]) if p > 0 else None
        hi = float(fence[p + 1]) if p + 1 < fence.size else None
        if lo is None or hi is None:
            continue  # boundary location: no room on one side, nothing to test
        ok, _fired, witness = _backline_check(g, lo, xi, hi, sc.s0 - n, sc.s0)
        if not ok:
            note = f"gamma2 index n={n}; {witness.note}" if witness else f"gamma2 index n={n}"
            ok_c = (False, Violation(witness.where, witness.measured, witness.threshold, note))
            break
    rep.add("c", ok_c[0], ok_c[1])
    return rep
