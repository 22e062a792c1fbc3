"""Checks and estimates run against a built construction.

Everything here is exact: rationals for ratios and distances, big ints for
positions. Each check returns a small report object with an ``ok`` flag so the
CLI and the tests share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .alphabet import STAR, WEIGHTS, ambient_distance, as_point, mdim_full_shift
from .construction import (
    ConstructionState,
    block_membership,
    evaluate_z,
    fiber_point,
    free_sets,
    restrict_to_J,
)
from .errors import CapacityError
from .lattice import Element, Window, add, elem, neg, sub
from .patch import Patch
from .radix import sparse_rank
from .templates import star_mismatch
from .tiling import TilingLevel, pattern_classes

CELL_CAP = 1 << 20


# --- almost periodicity ---------------------------------------------------------


@dataclass(frozen=True)
class PeriodicityReport:
    ok: bool
    gap: int | None
    centers: int
    failures: tuple


def _default_window(state: ConstructionState, m: int) -> Window:
    L = state.step(m + 1).side
    return Window(tuple(-2 * L for _ in range(state.dim)), tuple(2 * L for _ in range(state.dim)))


def check_almost_periodic(
    state: ConstructionState, m: int = 1, window: Window | None = None
) -> PeriodicityReport:
    """z on S_{n_m} against its translates by level-n_{m+1} centers inside ``window``."""
    base = state.step(m)
    outer = state.step(m + 1)
    window = window or _default_window(state, m)
    level = TilingLevel(outer.level, outer.side, state.dim)
    shape = base.shape
    reference = [evaluate_z(state, g) for g in shape]
    centers = [t.lo for t in level.tiles_in_window(window)]
    if len(centers) * shape.size > CELL_CAP:
        raise CapacityError("too many cells to compare; use a smaller window")
    passed, failures = [], []
    for c in centers:
        if not shape.translate(c).issubset(window):
            continue
        vals = [evaluate_z(state, add(g, c)) for g in shape]
        (passed if vals == reference else failures).append(c)
    return PeriodicityReport(not failures and len(passed) >= 2, _gap(passed), len(passed), tuple(failures))


def _gap(points: list) -> int | None:
    if len(points) < 2:
        return None
    best = 0
    for axis in range(len(points[0])):
        coords = sorted({p[axis] for p in points})
        best = max([best] + [b - a for a, b in zip(coords, coords[1:])])
    return best


# --- densities ----------------------------------------------------------------------


@dataclass(frozen=True)
class DensityRow:
    k: int
    stars: int
    size: int
    ratio: Fraction
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class DensityReport:
    t: Fraction
    rows: tuple
    nested: bool

    @property
    def ok(self) -> bool:
        return self.nested and all(r.ok for r in self.rows)


def density_report(state: ConstructionState, up_to: int | None = None) -> DensityReport:
    up_to = state.depth if up_to is None else up_to
    rows = []
    for k in range(1, up_to + 1):
        fs = free_sets(state, k)
        ratio = fs.ratio
        bound = state.t + Fraction(1, fs.size)
        rows.append(DensityRow(k, fs.stars, fs.size, ratio, bound, state.t < ratio <= bound))
    nested = all(
        p.window_ok and p.missing == 0
        for p in nesting_pairs(state, [(k, k + 1) for k in range(1, up_to)])
    )
    return DensityReport(state.t, tuple(rows), nested)


# --- nesting ---------------------------------------------------------------------


@dataclass(frozen=True)
class NestingPair:
    k: int
    m: int
    shift: Element
    window_ok: bool      # (a)
    missing: int         # stars of x_k that are not stars of x_m: (b) violations
    extra: int           # fixed cells of x_k that became stars of x_m: (c) violations

    @property
    def ok(self) -> bool:
        return self.window_ok and self.missing == 0 and self.extra == 0


@dataclass(frozen=True)
class NestingReport:
    pairs: tuple

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.pairs)


def _compare_cells(A, B, shape: Window, shift: Element) -> tuple[int, int]:
    if shape.size > CELL_CAP:
        raise CapacityError("template too large for a cellwise comparison")
    missing = extra = 0
    for g in shape:
        sa = A.value(g) is STAR
        sb = B.value(add(g, shift)) is STAR
        missing += sa and not sb
        extra += sb and not sa
    return missing, extra


def nesting_pairs(state: ConstructionState, pairs: Iterable, budget: int = 1 << 20) -> list[NestingPair]:
    out = []
    for k, m in pairs:
        xk, xm = state.step(k), state.step(m)
        shift = sub(state.shift(m - 1), state.shift(k - 1))
        inside = xk.shape.translate(shift).issubset(xm.shape)
        if not inside:
            out.append(NestingPair(k, m, shift, False, xk.stars, 0))
            continue
        A, B = xk.template, xm.template
        if state.dim == 1:
            missing, extra = star_mismatch(A, 0, B, shift[0], xk.side, budget)
        else:
            missing, extra = _compare_cells(A, B, xk.shape, shift)
        out.append(NestingPair(k, m, shift, True, missing, extra))
    return out


def check_nesting(state: ConstructionState, budget: int = 1 << 20) -> NestingReport:
    """(a) window inclusion, (b) star inclusion, (c) fixed-cell inclusion for all k < m."""
    K = state.depth
    pairs = [(k, m) for k in range(1, K + 1) for m in range(k + 1, K + 1)]
    return NestingReport(tuple(nesting_pairs(state, pairs, budget)))


# --- exhaustive pattern check --------------------------------------------------------


@dataclass(frozen=True)
class EnumerationReport:
    k: int
    count: int
    distinct: int
    expected: int
    ok: bool


def check_enumeration(state: ConstructionState, k: int = 2) -> EnumerationReport:
    """Read the star patterns of w_{k-1} over R_{k-1} and compare with K_{k-1}^{s_{k-1}}."""
    rec = state.step(k)
    prev = state.step(k - 1)
    sup = rec.support
    offsets = list(prev.template.star_offsets())
    seen = []
    for c in sup.centers.listed():
        seen.append(tuple(sup.w.value(add(c, o)) for o in offsets))
    expected = set(product(sup.net.points, repeat=len(offsets)))
    distinct = set(seen)
    ok = len(distinct) == len(seen) and distinct == expected
    return EnumerationReport(k, len(seen), len(distinct), len(expected), ok)


# --- mean dimension brackets ----------------------------------------------------------


@dataclass(frozen=True)
class ClassBound:
    residue: Element
    tiles: int
    leftover: int
    value: Fraction


def upper_classes(
    state: ConstructionState, k: int, window: Window, g_range: Iterable | None = None
) -> list[ClassBound]:
    """Per translate class: (tiles·s_k + leftover)·dim K / |window|."""
    rec = state.step(k)
    dimK = mdim_full_shift(state.alphabet)
    level = TilingLevel(rec.level, rec.side, state.dim)
    out = []
    if g_range is None:
        if level.size > 1 << 16:
            raise CapacityError("too many residues; pass g_range")
        for cls in pattern_classes(level, window).classes:
            value = Fraction((cls.tiles * rec.stars + cls.leftover) * dimK, window.size)
            out.append(ClassBound(cls.representative, cls.tiles, cls.leftover, value))
        return out
    for g in g_range:
        g = elem(g, state.dim)
        j = level.count_in_window(window, g)
        left = window.size - j * level.size
        out.append(ClassBound(g, j, left, Fraction((j * rec.stars + left) * dimK, window.size)))
    return out


def mdim_upper_estimate(
    state: ConstructionState, k: int, window: Window | None = None, g_range: Iterable | None = None
) -> Fraction:
    """Largest class bound; the default window is S_{n_k} with the aligned translate."""
    if window is None:
        window = state.step(k).shape
        g_range = [tuple(0 for _ in range(state.dim))] if g_range is None else g_range
    return max(c.value for c in upper_classes(state, k, window, g_range))


def mdim_lower_estimate(state: ConstructionState, k: int, m: int) -> Fraction:
    """ratio_k · (dim(K^m) - 1) / m."""
    if m < 1:
        raise ValueError("m must be positive")
    dimK = mdim_full_shift(state.alphabet)
    return free_sets(state, k).ratio * Fraction(max(0, m * dimK - 1), m)


@dataclass(frozen=True)
class MdimEstimate:
    window: Window
    k: int
    m: int
    lower: Fraction
    upper: Fraction
    slack: Fraction        # uncovered fraction in the worst class (0 when aligned)

    @property
    def ok(self) -> bool:
        return self.lower <= self.upper


def mdim_estimate(
    state: ConstructionState,
    k: int,
    m: int,
    window: Window | None = None,
    g_range: Iterable | None = None,
) -> MdimEstimate:
    if window is None:
        window = state.step(k).shape
        g_range = [tuple(0 for _ in range(state.dim))] if g_range is None else g_range
    classes = upper_classes(state, k, window, g_range)
    upper = max(c.value for c in classes)
    slack = max(Fraction(c.leftover, window.size) for c in classes)
    return MdimEstimate(window, k, m, mdim_lower_estimate(state, k, m), upper, slack)


# --- fiber approximation ----------------------------------------------------------------


@dataclass(frozen=True)
class FiberResult:
    s: int
    p: int
    eps: Fraction
    rank: int
    center: Element
    distance: Fraction
    tail: Fraction
    patch: Patch = field(repr=False)

    @property
    def ok(self) -> bool:
        return self.distance < self.eps


def fiber_depth(state: ConstructionState, s: int, eps) -> int:
    """Least p > s whose net mesh times the weight of T'_s falls below eps."""
    eps = Fraction(eps)
    mass = WEIGHTS.mass(free_sets(state, s).window)
    p = s + 1
    while state.net(p).mesh * mass >= eps:
        p += 1
        if p > 64:
            raise CapacityError(f"no net level is fine enough for eps = {eps}")
    return p


def check_fiber_approximation(state: ConstructionState, u, s: int, eps) -> FiberResult:
    """Find c = H_{p-1} + r_0 with D(x(u), c·z) < eps on T'_s.

    r_0 is the center of R_p whose pattern is u quantized to K_p; its rank is
    written down digit by digit, so R_p is never enumerated.
    """
    eps = Fraction(eps)
    u = {elem(g, state.dim): as_point(v) for g, v in restrict_to_J(state, s, u).items()}
    fs = free_sets(state, s)
    p = fiber_depth(state, s, eps)
    if state.depth < p + 1:
        raise CapacityError(
            f"insufficient depth: the fiber check needs R_{p}, i.e. {p + 1} steps; {state.depth} built"
        )
    x = fiber_point(state, u, fs.window)
    sup = state.step(p + 1).support
    xp = state.step(p).template
    H = state.shift(p - 1)
    digits = {}
    for g in fs.J_cells():
        q = add(g, H)
        digits[xp.star_index(q)] = sup.net.nearest(u[g])
    rank = sparse_rank(digits, len(sup.net), state.step(p).stars)
    c = add(H, sup.centers.center(rank))
    cz = Patch(fs.window, {g: evaluate_z(state, add(g, c)) for g in fs.window})
    distance = ambient_distance(x, cz)
    tail = (WEIGHTS.total - WEIGHTS.mass(fs.window)) * state.alphabet.diameter
    return FiberResult(s, p, eps, rank, c, distance, tail, x)


def fiber_block_check(state: ConstructionState, patch: Patch) -> list[bool]:
    """Block membership of a fiber patch at each level, on the tiling shifted by -H_{k-1}."""
    return [
        block_membership(patch, state, k, neg(state.shift(k - 1)))
        for k in range(1, state.depth + 1)
    ]
