"""Grid verification, family comparison and tightness statistics.

Every grid point is an independent work item.  With ``workers > 1`` chunks
are farmed out to a process pool and merged back in grid order, so reports do
not depend on worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .bounds import (
    BoundFamily,
    bracket_for,
    cert_k2,
    lower_radicand,
    reference_value,
)
from .errors import UsageError

DEFAULT_TOL = 1e-13
BISECT_TOL = 1e-12

KINDS = ("uniform-1d", "log-2d", "log-diagonal")


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid.

    ``uniform-1d``: moduli ``linspace`` over ``ranges[0]``; an end sitting on
    the open-domain boundary 0 or 1 is pulled inwards by ``margin``.
    ``log-2d``: ``(r, s)`` on the product of two geometric axes, r-major.
    ``log-diagonal``: the line ``r = s`` on a geometric axis.
    ``upper_half`` keeps only 2-d points with ``s > r``.
    """

    kind: str
    ranges: Tuple[Tuple[float, float], ...]
    points: Tuple[int, ...]
    margin: float = 0.0
    upper_half: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown grid kind {self.kind!r}")
        want = 2 if self.kind == "log-2d" else 1
        if len(self.ranges) != want or len(self.points) != want:
            raise UsageError(f"{self.kind} grid needs {want} range(s) and point count(s)")
        for (lo, hi), n in zip(self.ranges, self.points):
            if not lo < hi:
                raise UsageError(f"grid range needs min < max, got ({lo}, {hi})")
            if n < 2:
                raise UsageError("grid needs at least 2 points per axis")
            if self.kind != "uniform-1d" and lo <= 0:
                raise UsageError("logarithmic axes need positive bounds")
        if self.kind == "uniform-1d":
            lo, hi = self.ranges[0]
            if lo < 0 or hi > 1:
                raise UsageError("modulus grid must lie inside [0, 1]")
            if (lo == 0 or hi == 1) and not self.margin > 0:
                raise UsageError("a modulus grid touching 0 or 1 needs margin > 0")

    @classmethod
    def uniform(cls, points: int, lo: float = 0.0, hi: float = 1.0, margin: float = 1e-6) -> "GridSpec":
        return cls("uniform-1d", ((float(lo), float(hi)),), (int(points),), margin)

    @classmethod
    def log2d(
        cls,
        points: int,
        lo: float = 1e-2,
        hi: float = 1e2,
        s_lo: Optional[float] = None,
        s_hi: Optional[float] = None,
        s_points: Optional[int] = None,
        upper_half: bool = False,
    ) -> "GridSpec":
        s_lo = lo if s_lo is None else s_lo
        s_hi = hi if s_hi is None else s_hi
        return cls(
            "log-2d",
            ((float(lo), float(hi)), (float(s_lo), float(s_hi))),
            (int(points), int(s_points or points)),
            upper_half=upper_half,
        )

    @classmethod
    def diagonal(cls, points: int, lo: float = 1e-2, hi: float = 1e2) -> "GridSpec":
        return cls("log-diagonal", ((float(lo), float(hi)),), (int(points),))

    @property
    def dim(self) -> int:
        return 1 if self.kind == "uniform-1d" else 2

    def axis(self, i: int) -> np.ndarray:
        lo, hi = self.ranges[i]
        n = self.points[i]
        if self.kind == "uniform-1d":
            lo_eff = lo + self.margin if lo <= 0 else lo
            hi_eff = hi - self.margin if hi >= 1 else hi
            return np.linspace(lo_eff, hi_eff, n)
        return np.geomspace(lo, hi, n)

    def values(self) -> list:
        if self.kind == "uniform-1d":
            return [float(x) for x in self.axis(0)]
        if self.kind == "log-diagonal":
            return [(float(x), float(x)) for x in self.axis(0)]
        rs, ss = self.axis(0), self.axis(1)
        return [
            (float(r), float(s))
            for r in rs
            for s in ss
            if not self.upper_half or s > r
        ]


class PointResult(NamedTuple):
    """One grid evaluation.

    For bracket families ``lower``, ``upper`` and ``reference`` are values of
    the bounded integral.  For the certificate families (``k2-eq311-*``) they
    are in the certificate's own scale: ``reference = 4 K^2 / pi^2`` and
    ``lower, upper = center -+ radius``.
    """

    params: object
    lower: float
    upper: float
    reference: float
    clamped: bool

    @property
    def slack_lower(self) -> float:
        return self.reference - self.lower

    @property
    def slack_upper(self) -> float:
        return self.upper - self.reference

    @property
    def slack(self) -> float:
        return min(self.slack_lower, self.slack_upper)


def evaluate_point(family: BoundFamily, params) -> PointResult:
    ref = reference_value(family, params)
    if family.is_certificate:
        cert = cert_k2(params, family)
        x = 4.0 / math.pi**2 * ref * ref
        lo = cert.center - cert.radius
        return PointResult(params, lo, cert.center + cert.radius, x, lo < 0)
    br = bracket_for(family, params)
    return PointResult(params, br.lower, br.upper, ref, br.clamped_lower)


def _evaluate_chunk(args):
    family, chunk = args
    return [evaluate_point(family, p) for p in chunk]


def _check_compatible(family: BoundFamily, grid: GridSpec):
    if family.dim != grid.dim:
        raise UsageError(f"{family} needs a {family.dim}-d grid, got {grid.kind}")


def evaluate_grid(family, grid: GridSpec, workers: int = 1) -> List[PointResult]:
    family = BoundFamily.parse(family)
    _check_compatible(family, grid)
    params = grid.values()
    if workers <= 1 or len(params) < 2 * workers:
        return [evaluate_point(family, p) for p in params]
    size = -(-len(params) // (4 * workers))
    chunks = [(family, params[i:i + size]) for i in range(0, len(params), size)]
    out: List[PointResult] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_evaluate_chunk, chunks):
            out.extend(part)
    return out


# -- verification -------------------------------------------------------------

@dataclass
class Violation:
    params: object
    reference_value: float
    bracket: Tuple[float, float]
    slack: float


@dataclass
class VerificationReport:
    family: BoundFamily
    grid: GridSpec
    n_points: int
    n_violations: int
    worst_violation: float
    min_slack: float
    violations: List[Violation]
    verdict: str
    tol: float = DEFAULT_TOL
    argmin_slack: object = None
    n_clamped: int = 0
    n_outside_hypothesis: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == "HOLDS"


def verify_family(
    family,
    grid: GridSpec,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    max_listed: int = 50,
) -> VerificationReport:
    """Sweep ``grid`` and check that the reference value sits inside each bracket.

    A point is a violation when its slack is below ``-tol``.  The listed
    violations are the ``max_listed`` worst, ordered by slack then grid index.
    """
    family = BoundFamily.parse(family)
    rows = evaluate_grid(family, grid, workers)
    if not rows:
        raise UsageError("grid is empty")
    slacks = [row.slack for row in rows]
    imin = min(range(len(rows)), key=slacks.__getitem__)
    bad = [i for i, sl in enumerate(slacks) if sl < -tol]
    listed = sorted(bad, key=lambda i: (slacks[i], i))[:max_listed]
    violations = [
        Violation(rows[i].params, rows[i].reference, (rows[i].lower, rows[i].upper), slacks[i]) for i in listed
    ]
    n_outside = 0
    if family.is_certificate:
        n_outside = sum(1 for row in rows if not row.params[1] > row.params[0])
    return VerificationReport(
        family=family,
        grid=grid,
        n_points=len(rows),
        n_violations=len(bad),
        worst_violation=max((-slacks[i] for i in bad), default=0.0),
        min_slack=slacks[imin],
        violations=violations,
        verdict="FAILS" if bad else "HOLDS",
        tol=tol,
        argmin_slack=rows[imin].params,
        n_clamped=sum(1 for row in rows if row.clamped),
        n_outside_hypothesis=n_outside,
    )


# -- comparison ------------------------------------------------------------------

@dataclass
class Window:
    lo: float
    hi: float
    verdict: str


@dataclass
class ComparisonReport:
    families: Tuple[BoundFamily, BoundFamily]
    side: str
    dominance: str
    crossing_points: List[float]
    windows: List[Window]
    grid: GridSpec
    n_points: int = 0
    n_a_better: int = 0
    n_b_better: int = 0
    n_ties: int = 0

    def dominance_window(self, x: float) -> Optional[Window]:
        """The window containing ``x`` in which A dominates, if any."""
        for w in self.windows:
            if w.lo <= x <= w.hi and w.verdict == "A-dominates":
                return w
        return None


def _advantage(a: BoundFamily, b: BoundFamily, side: str, params) -> float:
    """Positive when family ``a`` gives the tighter bound on ``side``."""
    ba, bb = bracket_for(a, params), bracket_for(b, params)
    if side == "lower":
        return ba.lower - bb.lower
    return bb.upper - ba.upper


def _bisect_sign_change(fn, lo: float, hi: float, tol: float) -> float:
    flo = fn(lo)
    for _ in range(200):
        if hi - lo <= tol * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compare_families(a, b, side: str, grid: GridSpec, tol: float = BISECT_TOL) -> ComparisonReport:
    """Classify which of two families gives the tighter ``side`` bound over ``grid``.

    On 1-d grids each sign change of the advantage between neighbouring grid
    points is refined by bisection, and the grid range is split into windows
    of uniform dominance.
    """
    a, b = BoundFamily.parse(a), BoundFamily.parse(b)
    if side not in ("lower", "upper"):
        raise UsageError(f"side must be 'lower' or 'upper', got {side!r}")
    if a.quantity != b.quantity or a.is_certificate or b.is_certificate:
        raise UsageError(f"{a} and {b} do not bound the same quantity on the same scale")
    _check_compatible(a, grid)
    params = grid.values()
    adv = [_advantage(a, b, side, p) for p in params]
    n_a = sum(1 for d in adv if d > 0)
    n_b = sum(1 for d in adv if d < 0)
    n_tie = len(adv) - n_a - n_b
    if n_b == 0:
        dominance = "A-dominates"
    elif n_a == 0:
        dominance = "B-dominates"
    else:
        dominance = "crossing"

    crossings: List[float] = []
    windows: List[Window] = []
    if grid.dim == 1:
        fn = lambda x: _advantage(a, b, side, x)  # noqa: E731
        prev_i = None
        for i, d in enumerate(adv):
            if d == 0:
                continue
            if prev_i is not None and (d > 0) != (adv[prev_i] > 0):
                crossings.append(_bisect_sign_change(fn, params[prev_i], params[i], tol))
            prev_i = i
        edges = [params[0]] + crossings + [params[-1]]
        signs = [d for d in adv if d != 0]
        if signs:
            first = signs[0] > 0
            for k in range(len(edges) - 1):
                better_a = first if k % 2 == 0 else not first
                windows.append(Window(edges[k], edges[k + 1], "A-dominates" if better_a else "B-dominates"))
    return ComparisonReport((a, b), side, dominance, crossings, windows, grid, len(adv), n_a, n_b, n_tie)


# -- tightness -------------------------------------------------------------------

@dataclass
class TightnessSummary:
    family: BoundFamily
    n_points: int
    n_clamped: int
    max_rel_width: float
    mean_rel_width: float
    argmax: object


def tightness(family, grid: GridSpec, workers: int = 1) -> TightnessSummary:
    """Relative bracket width ``(upper - lower) / reference`` over non-clamped points."""
    family = BoundFamily.parse(family)
    rows = evaluate_grid(family, grid, workers)
    widths = [((row.upper - row.lower) / row.reference, row.params) for row in rows if not row.clamped]
    n_clamped = len(rows) - len(widths)
    if not widths:
        return TightnessSummary(family, len(rows), n_clamped, math.nan, math.nan, None)
    best = max(widths, key=lambda w: w[0])
    return TightnessSummary(
        family,
        len(rows),
        n_clamped,
        best[0],
        math.fsum(w for w, _ in widths) / len(widths),
        best[1],
    )


# -- clamp thresholds ---------------------------------------------------------------

_CLAMP_SEARCH = {
    BoundFamily.K_Eq35: (0.0, 1.0),
    BoundFamily.E2_Eq39: (1.0, 1e3),
    BoundFamily.E_Eq31: (0.0, 1.0),
}


def find_clamp_threshold(family) -> float:
    """Where the lower-endpoint radicand changes sign.

    For ``k-eq35`` this is the modulus r* solving ``32 - 32 r^2 - r^4 = 0``;
    for ``e2-eq39`` it is the aspect ratio c = s/r > 1 solving
    ``8c(1 + c^2) = (c^2 - 1)^2``.
    """
    family = BoundFamily.parse(family)
    if family not in _CLAMP_SEARCH:
        raise UsageError(f"{family} has no lower radicand")
    lo, hi = _CLAMP_SEARCH[family]
    f_lo, f_hi = lower_radicand(family, lo), lower_radicand(family, hi)
    if (f_lo > 0) == (f_hi > 0):
        raise UsageError(f"lower radicand of {family} does not change sign on [{lo}, {hi}]")
    return _bisect_sign_change(lambda x: lower_radicand(family, x), lo, hi, 0.0)
