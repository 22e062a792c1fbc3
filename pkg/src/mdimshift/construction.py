"""The inductive block construction of a minimal subshift with prescribed star density.

Step 1 fixes a template x_1 on the level-n_1 box with a prescribed number of
stars. Step k (k >= 2) picks a support level l_{k-1} holding one tile per star
pattern over the net K_{k-1} (the centers R_{k-1}) plus one spare tile h_{k-1},
fills those tiles to get w_{k-1}, and embeds w_{k-1} at the corner of a larger
box to form x_k, trimming stars so the density bracket holds again.

The limit point z is read off the last template: z(p) = x_K(p mod L_K) whenever
that cell is not a star.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .alphabet import STAR, Alphabet, DenseNet, as_point, net_for
from .errors import CapacityError, ConfigError, ConstructionError, Undetermined
from .lattice import (
    Element,
    Window,
    add,
    elem,
    enumerate_element,
    identity,
    neg,
    sub,
)
from .patch import Patch, translate_patch
from .templates import (
    FirstTemplate,
    Overridden,
    TableTemplate,
    WTemplate,
    XTemplate,
    lattice_points,
    table_first,
    table_w,
    table_x,
)
from .tiling import TilingLevel, TilingSequence

MODES = ("exact", "lazy", "skeleton")
DEFAULT_DEPTH = {"exact": 2, "lazy": 3, "skeleton": None}
RANK_BITS_CAP = 1 << 16
LEVEL_SEARCH_CAP = 1 << 12

__all__ = [
    "ConstructionState",
    "FreeSets",
    "StepRecord",
    "Support",
    "block_membership",
    "build_construction",
    "build_level_patterns",
    "build_w",
    "corrupt_template",
    "evaluate_z",
    "extend",
    "fiber_point",
    "free_sets",
    "init_step1",
    "select_next_level",
    "select_support",
    "star_count",
    "translate_patch",
    "z_patch",
]


def star_count(t, size: int) -> int:
    """The unique count c with t < c/size <= t + 1/size, i.e. floor(t·size) + 1."""
    t = Fraction(t)
    if not 0 <= t < 1:
        raise ConfigError(f"t = {t} must lie in [0, 1)")
    if size < 1:
        raise ValueError("size must be positive")
    return (t.numerator * size) // t.denominator + 1


# --- center sets ---------------------------------------------------------------


class LineCenters:
    """R = {0, L, 2L, ..., (count-1)L} ⊂ Z, never listed."""

    def __init__(self, tile: int, count: int):
        self.tile, self.count = tile, count

    def center(self, rank: int) -> Element:
        if not 0 <= rank < self.count:
            raise IndexError(rank)
        return (rank * self.tile,)

    def rank(self, c) -> int | None:
        q, r = divmod(elem(c)[0], self.tile)
        return q if r == 0 and 0 <= q < self.count else None

    def __contains__(self, c) -> bool:
        return self.rank(c) is not None

    def listed(self, limit: int = 1 << 16) -> list[Element]:
        if self.count > limit:
            raise CapacityError(f"{self.count} centers are too many to list")
        return [self.center(j) for j in range(self.count)]


class ListCenters:
    """An explicit center list in enumeration order."""

    def __init__(self, points: list):
        self.points = list(points)
        self.count = len(self.points)
        self._rank = {c: i for i, c in enumerate(self.points)}

    def center(self, rank: int) -> Element:
        return self.points[rank]

    def rank(self, c) -> int | None:
        return self._rank.get(tuple(c))

    def __contains__(self, c) -> bool:
        return tuple(c) in self._rank

    def listed(self, limit: int = 1 << 16) -> list[Element]:
        return list(self.points)


# --- records -------------------------------------------------------------------


@dataclass(frozen=True)
class Support:
    """Data chosen at the start of step k: l_{k-1}, R_{k-1}, h_{k-1} and w_{k-1}."""

    level: int
    side: int
    centers: object       # LineCenters | ListCenters
    h: Element
    w: object
    net: DenseNet

    @property
    def size(self) -> int:
        return self.centers.count


@dataclass(frozen=True)
class StepRecord:
    k: int
    level: int            # n_k
    side: int             # L_{n_k}
    stars: int            # s_k
    template: object      # x_{k,1}
    support: Support | None = None
    copy_stars: int = 0   # stars inherited from w_{k-1}
    keep: int = 0         # stars kept outside the copy

    @property
    def dim(self) -> int:
        return self.template.dim

    @property
    def size(self) -> int:
        return self.side ** self.dim

    @property
    def density(self) -> Fraction:
        return Fraction(self.stars, self.size)

    @property
    def shape(self) -> Window:
        return Window.cube(self.side, self.dim)


@dataclass(frozen=True)
class ConstructionState:
    t: Fraction
    alphabet: Alphabet
    sequence: TilingSequence
    mode: str
    n1: int
    steps: tuple
    max_depth: int | None = None

    @property
    def dim(self) -> int:
        return self.sequence.dim

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def fill(self) -> tuple:
        return self.alphabet.base_point

    @property
    def tabular(self) -> bool:
        return self.mode == "exact" or self.dim > 1

    def step(self, k: int) -> StepRecord:
        if not 1 <= k <= len(self.steps):
            raise CapacityError(f"step {k} is not built (depth {self.depth})")
        return self.steps[k - 1]

    def template(self, k: int):
        return self.step(k).template

    def net(self, k: int) -> DenseNet:
        return net_for(self.alphabet, k, self.mode == "skeleton")

    def h(self, k: int) -> Element:
        """h_k, chosen while building step k+1."""
        return self.step(k + 1).support.h

    def shift(self, k: int) -> Element:
        """H_k = h_1 + ... + h_k (H_0 = e)."""
        H = identity(self.dim)
        for j in range(1, k + 1):
            H = add(H, self.h(j))
        return H


# --- steps ---------------------------------------------------------------------


def init_step1(
    t,
    alphabet: Alphabet,
    sequence: TilingSequence,
    n1: int = 1,
    mode: str = "lazy",
    max_depth: int | None = -1,
) -> ConstructionState:
    """Step 1: stars on the first star_count cells of the level-n_1 shape."""
    t = Fraction(t)
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    star_count(t, 1)
    if max_depth == -1:
        max_depth = DEFAULT_DEPTH[mode]
    side = sequence.side(n1)
    d = sequence.dim
    s = star_count(t, side ** d)
    state = ConstructionState(t, alphabet, sequence, mode, n1, (), max_depth)
    if state.tabular:
        tmpl = table_first(side, d, s, alphabet.base_point)
    else:
        tmpl = FirstTemplate(side, s, alphabet.base_point)
    return dataclasses.replace(state, steps=(StepRecord(1, n1, side, s, tmpl),))


def select_support(state: ConstructionState, k: int) -> Support:
    """Minimal level l_{k-1} whose shape holds |R_{k-1}| + 1 tiles of level n_{k-1}."""
    prev = state.step(k - 1)
    net = state.net(k - 1)
    b, s, d = len(net), prev.stars, state.dim
    if b > 1 and s * b.bit_length() > RANK_BITS_CAP:
        raise CapacityError(
            f"|R_{k-1}| = {b}^{s} is beyond the representable range (step {k})"
        )
    count = b ** s
    seq = state.sequence
    level = prev.level + 1
    while True:
        side = seq.side(level)
        if (side // prev.side) ** d >= count + 1:
            break
        level += 1
    if state.tabular:
        pts = lattice_points(prev.side, side, d)
        centers = ListCenters(pts[:count])
        h = pts[count]
        ranks = {c: i for i, c in enumerate(centers.points)}
        w = table_w(prev.template, side, ranks, net.points)
    else:
        centers = LineCenters(prev.side, count)
        h = (count * prev.side,)
        w = WTemplate(prev.template, side, count, net.points)
    return Support(level, side, centers, h, w, net)


def _outside_stars(prev: StepRecord, support: Support, side: int, d: int) -> int:
    tiles = (side // prev.side) ** d - (support.side // prev.side) ** d
    return tiles * prev.stars


def select_next_level(state: ConstructionState, k: int, support: Support) -> int:
    """Minimal n_k with g_{k-1} + H_{k-1} inside, the support box inside, enough
    outside stars to beat t, and room for the stars the copy of w_{k-1} carries."""
    prev = state.step(k - 1)
    d = state.dim
    H = add(state.shift(k - 2), support.h) if k > 2 else support.h
    target = add(enumerate_element(k - 1, d), H)
    copy = support.w.stars
    if state.t == 0 and copy > 1:
        raise ConstructionError(
            f"step {k}: w_{k-1} carries {copy} stars but t = 0 allows one per block"
        )
    seq = state.sequence
    level = max(support.level, prev.level + 1)
    for _ in range(LEVEL_SEARCH_CAP):
        side = seq.side(level)
        size = side ** d
        inside = all(0 <= x < side for x in target)
        dense = Fraction(_outside_stars(prev, support, side, d), size) > state.t
        room = copy <= star_count(state.t, size)
        if inside and dense and room:
            return level
        level += 1
    raise ConstructionError(f"no admissible level for step {k} within the search range")


def build_level_patterns(
    state: ConstructionState, k: int, support: Support, level: int
) -> StepRecord:
    """x_{k,1}: w_{k-1} at the corner, level-(k-1) blocks elsewhere, stars trimmed."""
    prev = state.step(k - 1)
    d = state.dim
    side = state.sequence.side(level)
    total = star_count(state.t, side ** d)
    copy = support.w.stars
    keep = total - copy
    available = _outside_stars(prev, support, side, d)
    if not 0 <= keep <= available:
        raise ConstructionError(
            f"step {k}: need {keep} outside stars, {available} available"
        )
    if state.tabular:
        tmpl = table_x(prev.template, support.w, side, keep, state.fill)
    else:
        tmpl = XTemplate(prev.template, support.w, side, keep, state.fill)
    if tmpl.stars != total:
        raise ConstructionError(f"step {k}: template has {tmpl.stars} stars, want {total}")
    return StepRecord(k, level, side, total, tmpl, support, copy, keep)


def extend(state: ConstructionState) -> ConstructionState:
    """Run the next step."""
    k = state.depth + 1
    if state.max_depth is not None and k > state.max_depth:
        raise CapacityError(
            f"{state.mode} mode stops at depth {state.max_depth}; step {k} requested"
        )
    support = select_support(state, k)
    level = select_next_level(state, k, support)
    record = build_level_patterns(state, k, support, level)
    return dataclasses.replace(state, steps=state.steps + (record,))


def build_construction(
    t,
    alphabet: Alphabet,
    sequence: TilingSequence,
    steps: int,
    n1: int = 1,
    mode: str = "lazy",
    max_depth: int | None = -1,
) -> ConstructionState:
    if steps < 1:
        raise ConfigError("at least one step is required")
    state = init_step1(t, alphabet, sequence, n1, mode, max_depth)
    while state.depth < steps:
        state = extend(state)
    return state


def build_w(state: ConstructionState, k: int, position) -> object:
    """w_{k-1} at a position of its support box S_{l_{k-1}}."""
    support = state.step(k).support
    if support is None:
        raise ValueError("w_{k-1} exists only for k >= 2")
    g = elem(position, state.dim)
    if not all(0 <= x < support.side for x in g):
        raise ValueError(f"{g} is outside the support box [0, {support.side})^{state.dim}")
    return support.w.value(g)


# --- the point z -----------------------------------------------------------------


def evaluate_z(state: ConstructionState, position, via: int | None = None):
    """z at ``position``, read through the template of step ``via`` (default: last)."""
    K = state.depth if via is None else via
    rec = state.step(K)
    g = elem(position, state.dim)
    v = rec.template.value(tuple(x % rec.side for x in g))
    if v is STAR:
        raise Undetermined(f"z at {g} is still free after {K} steps")
    return v


PATCH_CAP = 1 << 20


def z_patch(state: ConstructionState, window: Window, via: int | None = None) -> Patch:
    if window.size > PATCH_CAP:
        raise CapacityError(f"window of {window.size} cells exceeds the patch limit {PATCH_CAP}")
    return Patch(window, {g: evaluate_z(state, g, via) for g in window})


def corrupt_template(state: ConstructionState, k: int, offset, value) -> ConstructionState:
    """A copy of the state whose step-k template has one cell replaced."""
    rec = state.step(k)
    off = elem(offset, state.dim)
    v = value if value is STAR else as_point(value)
    bad = dataclasses.replace(rec, template=Overridden(rec.template, {off: v}))
    steps = list(state.steps)
    steps[k - 1] = bad
    return dataclasses.replace(state, steps=tuple(steps))


# --- free sets and fibers ---------------------------------------------------------


@dataclass(frozen=True)
class FreeSets:
    """T'_k = S_{n_k} - H_{k-1} and J_k = stars(x_k) - H_{k-1}."""

    k: int
    window: Window
    shift: Element
    template: object
    stars: int

    @property
    def size(self) -> int:
        return self.window.size

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.stars, self.size)

    def in_T(self, g) -> bool:
        return elem(g) in self.window

    def in_J(self, g) -> bool:
        g = elem(g)
        return g in self.window and self.template.value(add(g, self.shift)) is STAR

    def J_cells(self) -> list[Element]:
        back = neg(self.shift)
        return [add(o, back) for o in self.template.star_offsets()]


def free_sets(state: ConstructionState, k: int) -> FreeSets:
    rec = state.step(k)
    H = state.shift(k - 1)
    window = rec.shape.translate(neg(H))
    return FreeSets(k, window, H, rec.template, rec.stars)


def block_membership(patch: Patch, state: ConstructionState, k: int, shift=None) -> bool:
    """Does the patch agree with x_k off stars on every level-n_k tile inside it?

    ``shift`` translates the tiling (tiles S_{n_k} + c + shift).
    """
    if not patch.is_full:
        raise ValueError("block membership needs a fully valued patch")
    rec = state.step(k)
    level = TilingLevel(rec.level, rec.side, state.dim)
    for tile in level.tiles_in_window(patch.window, shift):
        corner = tile.lo
        for g in tile:
            v = rec.template.value(sub(g, corner))
            if v is not STAR and patch.cells[g] != v:
                return False
    return True


def first_free_step(state: ConstructionState, g, sets: list[FreeSets] | None = None) -> int | None:
    """l(g): the least k with g in T'_k but not in J_k."""
    sets = sets or [free_sets(state, k) for k in range(1, state.depth + 1)]
    for fs in sets:
        if fs.in_T(g) and not fs.in_J(g):
            return fs.k
    return None


def fiber_point(state: ConstructionState, u: dict, W: Window) -> Patch:
    """x(u) on W: u on J, and omega_g = z(g + H_{l(g)-1}) elsewhere."""
    K = state.depth
    sets = [free_sets(state, k) for k in range(1, K + 1)]
    if not W.issubset(sets[-1].window):
        raise Undetermined(f"{W} is not inside T'_{K} = {sets[-1].window}")
    u = {elem(g, state.dim): as_point(v) for g, v in u.items()}
    cells = {}
    for g in W:
        if sets[-1].in_J(g):
            if g not in u:
                raise ValueError(f"u has no value at free position {g}")
            cells[g] = u[g]
            continue
        l = first_free_step(state, g, sets)
        cells[g] = evaluate_z(state, add(g, state.shift(l - 1)))
    return Patch(W, cells)


def restrict_to_J(state: ConstructionState, k: int, values: Iterable | dict) -> dict:
    """Pair J_k (in star order) with values, or pass a ready dict through."""
    if isinstance(values, dict):
        return values
    cells = free_sets(state, k).J_cells()
    values = list(values)
    if len(values) != len(cells):
        raise ValueError(f"J_{k} has {len(cells)} cells, got {len(values)} values")
    return dict(zip(cells, values))
