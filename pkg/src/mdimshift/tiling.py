"""Nested box tilings of Z^d and the tile-counting predicates built on them.

A level with side L tiles Z^d by the cubes [0, L)^d + c for c in L·Z^d. Centers
are never listed; membership and counting are closed-form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CapacityError, TilingError
from .lattice import Element, Window, add, elem, identity, is_invariant, sub


def _floordiv_ceil(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class TilingLevel:
    level: int
    side: int
    dim: int = 1

    @property
    def shape(self) -> Window:
        return Window.cube(self.side, self.dim)

    @property
    def size(self) -> int:
        return self.side ** self.dim

    def is_center(self, c) -> bool:
        return all(x % self.side == 0 for x in elem(c, self.dim))

    def center_of(self, g) -> Element:
        """Center of the (untranslated) tile containing g."""
        return tuple((x // self.side) * self.side for x in elem(g, self.dim))

    def tile(self, c) -> Window:
        return self.shape.translate(c)

    def _center_ranges(self, g: Element, window: Window) -> list[range]:
        # tile [c+g, c+g+L) inside [lo, hi)  <=>  lo-g <= c <= hi-g-L, c in L·Z
        out = []
        for x, lo, hi in zip(g, window.lo, window.hi):
            first = _floordiv_ceil(lo - x, self.side)
            last = (hi - x - self.side) // self.side
            out.append(range(first, last + 1))
        return out

    def count_in_window(self, window: Window, g=None) -> int:
        g = identity(self.dim) if g is None else elem(g, self.dim)
        n = 1
        for r in self._center_ranges(g, window):
            n *= max(0, len(r))
        return n

    def tiles_in_window(self, window: Window, g=None) -> list[Window]:
        """Tiles of the translated tiling T+g lying entirely inside ``window``."""
        g = identity(self.dim) if g is None else elem(g, self.dim)
        ranges = self._center_ranges(g, window)
        return [
            self.tile(add(tuple(j * self.side for j in js), g))
            for js in product(*ranges)
        ]

    def tiles_inside(self, window: Window) -> list[tuple[int, Element]]:
        """(shape id, center) for untranslated tiles inside ``window``."""
        return [(0, t.lo) for t in self.tiles_in_window(window)]

    def shape_of(self, shape_id: int) -> Window:
        return self.shape


def tiles_in_window(level: TilingLevel, g, window: Window) -> list[Window]:
    return level.tiles_in_window(window, g)


def covered_proportion(level: TilingLevel, g, window: Window) -> Fraction:
    """Fraction of ``window`` covered by tiles of T+g that lie inside it."""
    return Fraction(level.count_in_window(window, g) * level.size, window.size)


def count_shape_tiles(level: TilingLevel, window: Window) -> int:
    return level.count_in_window(window)


@dataclass(frozen=True)
class TilingSequence:
    """Box levels with sides L_1 | L_2 | ..., optionally extended geometrically.

    With ``extend_ratio`` set, levels past the explicit list continue with that
    ratio up to ``max_levels``; without it, asking for a missing level raises
    :class:`CapacityError`.
    """

    sides: tuple
    dim: int = 1
    extend_ratio: int | None = None
    max_levels: int = 1 << 14

    def __post_init__(self):
        sides = tuple(int(s) for s in self.sides)
        object.__setattr__(self, "sides", sides)
        if not sides:
            raise TilingError("at least one side is required")
        if sides[0] < 1:
            raise TilingError(f"side {sides[0]} must be positive")
        for a, b in zip(sides, sides[1:]):
            if b <= a or b % a:
                raise TilingError(f"sides ({a}, {b}) must increase with {a} dividing {b}")
        if self.extend_ratio is not None and self.extend_ratio < 2:
            raise TilingError("extension ratio must be at least 2")

    @property
    def explicit_levels(self) -> int:
        return len(self.sides)

    def side(self, level: int) -> int:
        if level < 1:
            raise ValueError("levels start at 1")
        if level <= len(self.sides):
            return self.sides[level - 1]
        if self.extend_ratio is None or level > self.max_levels:
            raise CapacityError(
                f"tiling sequence exhausted: level {level} requested, "
                f"{len(self.sides) if self.extend_ratio is None else self.max_levels} available"
            )
        return self.sides[-1] * self.extend_ratio ** (level - len(self.sides))

    def level(self, level: int) -> TilingLevel:
        return TilingLevel(level, self.side(level), self.dim)

    def has_level(self, level: int) -> bool:
        try:
            self.side(level)
        except CapacityError:
            return False
        return True

    @property
    def levels(self) -> list[TilingLevel]:
        return [self.level(i) for i in range(1, len(self.sides) + 1)]

    def is_invariant_level(self, level: int, A: Iterable, eta) -> bool:
        """Check that the level's shape is (A, eta)-invariant."""
        return is_invariant(self.level(level).shape, A, eta)


def build_box_sequence(sides: Sequence[int], d: int = 1, extend: bool = False) -> TilingSequence:
    """Validate a side list and return the nested box tiling sequence."""
    sides = tuple(int(s) for s in sides)
    ratio = None
    if extend:
        ratio = sides[-1] // sides[-2] if len(sides) > 1 else sides[-1]
    return TilingSequence(sides, d, ratio)


def geometric_sequence(base: int = 4, d: int = 1, first: int | None = None) -> TilingSequence:
    """Sides first, first*base, first*base^2, ... without an explicit end."""
    first = base if first is None else first
    return TilingSequence((first,), d, base)


# --- hand-made fixture tilings ------------------------------------------------


@dataclass(frozen=True)
class FixtureTiling:
    """An explicit tiling of a window by box shapes, read from a fixture file."""

    window: Window
    shapes: dict = field(hash=False)
    tiles: tuple = ()

    @property
    def dim(self) -> int:
        return self.window.dim

    def shape_of(self, shape_id) -> Window:
        return self.shapes[shape_id]

    def tile(self, shape_id, center) -> Window:
        return self.shapes[shape_id].translate(center)

    def tiles_inside(self, window: Window) -> list[tuple]:
        return [(s, c) for s, c in self.tiles if self.tile(s, c).issubset(window)]

    def is_partition(self) -> bool:
        seen: set = set()
        for s, c in self.tiles:
            for cell in self.tile(s, c):
                if cell in seen or cell not in self.window:
                    return False
                seen.add(cell)
        return len(seen) == self.window.size

    def centers(self, shape_id) -> list[Element]:
        return [c for s, c in self.tiles if s == shape_id]


@dataclass(frozen=True)
class FixtureSequence:
    tilings: tuple

    def level(self, k: int):
        return self.tilings[k - 1]


def parse_fixture(text: str) -> FixtureTiling:
    """Parse the fixture tiling format.

    ``window a:b [c:d ...]`` gives the covered box, ``shape ID a:b ...`` a box
    shape, and ``tile ID x [y ...]`` one tile by shape id and center.
    """
    window = None
    shapes: dict = {}
    tiles: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "window":
                window = _parse_box(rest)
            elif head == "shape":
                shapes[rest[0]] = _parse_box(rest[1:])
            elif head == "tile":
                if rest[0] not in shapes:
                    raise TilingError(f"unknown shape {rest[0]!r}")
                tiles.append((rest[0], tuple(int(x) for x in rest[1:])))
            else:
                raise TilingError(f"unknown record {head!r}")
        except (IndexError, ValueError) as exc:
            raise TilingError(f"line {lineno}: {exc}") from None
    if window is None:
        raise TilingError("fixture has no window record")
    return FixtureTiling(window, shapes, tuple(tiles))


def _parse_box(parts: list[str]) -> Window:
    lo, hi = [], []
    for p in parts:
        a, b = p.split(":")
        lo.append(int(a))
        hi.append(int(b))
    return Window(tuple(lo), tuple(hi))


def load_fixture(path) -> FixtureTiling:
    return parse_fixture(Path(path).read_text())


def dump_fixture(tiling: FixtureTiling) -> str:
    box = lambda w: " ".join(f"{a}:{b}" for a, b in zip(w.lo, w.hi))  # noqa: E731
    lines = [f"window {box(tiling.window)}"]
    lines += [f"shape {sid} {box(w)}" for sid, w in tiling.shapes.items()]
    lines += [f"tile {sid} " + " ".join(map(str, c)) for sid, c in tiling.tiles]
    return "\n".join(lines) + "\n"


# --- prime congruence ---------------------------------------------------------


def check_prime_congruence(seq, k: int, window: Window) -> bool:
    """True iff every level-(k+1) tile inside ``window`` is cut by level-k tiles
    in one and the same way (per shape), and those pieces partition the tile."""
    coarse, fine = seq.level(k + 1), seq.level(k)
    seen: dict = {}
    for shape_id, c in coarse.tiles_inside(window):
        big = coarse.shape_of(shape_id).translate(c)
        parts = fine.tiles_inside(big)
        covered = sum(fine.shape_of(s).size for s, _ in parts)
        if covered != big.size:
            return False
        pattern = frozenset((s, sub(cc, c)) for s, cc in parts)
        if seen.setdefault(shape_id, pattern) != pattern:
            return False
    return True


# --- translate classes ---------------------------------------------------------


@dataclass(frozen=True)
class PatternClass:
    representative: Element
    residues: tuple
    cuts: tuple          # per dimension, tile boundaries strictly inside the window
    tiles: int           # fully contained tiles (j_i)
    leftover: int        # |A_i|
    leftover_cells: frozenset | None

    def pieces(self, window: Window) -> list[Window]:
        """The restricted tiling T g|_window as a list of boxes."""
        edges = [
            [lo, *cut, hi] for lo, cut, hi in zip(window.lo, self.cuts, window.hi)
        ]
        spans = [list(zip(e, e[1:])) for e in edges]
        return [
            Window(tuple(a for a, _ in combo), tuple(b for _, b in combo))
            for combo in product(*spans)
        ]


@dataclass(frozen=True)
class PatternClassReport:
    window: Window
    side: int
    classes: tuple

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, g) -> PatternClass:
        r = tuple(x % self.side for x in elem(g, self.window.dim))
        for cls in self.classes:
            if r in cls.residues:
                return cls
        raise KeyError(g)


CELL_LIST_CAP = 1 << 16


def _cuts(lo: int, hi: int, shift: int, side: int) -> tuple:
    first = lo + (shift - lo) % side
    if first == lo:
        first += side
    return tuple(range(first, hi, side))


def pattern_classes(level: TilingLevel, window: Window) -> PatternClassReport:
    """Group the translates g (mod side) by their restricted tiling on ``window``."""
    groups: dict = {}
    for r in product(range(level.side), repeat=level.dim):
        key = tuple(
            _cuts(lo, hi, x, level.side) for lo, hi, x in zip(window.lo, window.hi, r)
        )
        groups.setdefault(key, []).append(r)
    classes = []
    for key, residues in groups.items():
        rep = residues[0]
        tiles = level.tiles_in_window(window, rep)
        left = window.size - len(tiles) * level.size
        cells = None
        if window.size <= CELL_LIST_CAP:
            covered = {c for t in tiles for c in t}
            cells = frozenset(c for c in window if c not in covered)
        classes.append(PatternClass(rep, tuple(residues), key, len(tiles), left, cells))
    return PatternClassReport(window, level.side, tuple(classes))
