"""Block templates x_{k,1} and embedding patches w_k.

Two interchangeable representations:

* line templates (d = 1): closed-form recursive evaluation with big-int
  offsets, used for the lazy and skeleton modes where shapes reach 2^100+ cells;
* table templates (any d): every cell materialized, built by direct iteration
  over the shape in enumeration order.

Both expose ``value(offset)``, ``star_index(offset)``, ``stars`` and ``side``.
"""

from __future__ import annotations

from typing import Iterator

from .alphabet import STAR
from .errors import CapacityError
from .lattice import Element, Window, add, enumeration_sorted, index_of
from .radix import pattern_digit

TABLE_CAP = 1 << 20
LIST_CAP = 1 << 20
CELLWISE = 2048


class LineTemplate:
    """Template over [0, side) ⊂ Z; offsets are plain ints internally."""

    dim = 1
    depth = 0

    def value(self, offset):
        return self._v(offset[0])

    def is_star(self, offset) -> bool:
        return self._v(offset[0]) is STAR

    def star_index(self, offset) -> int:
        return self._below(offset[0])

    def stars_between(self, lo: int, hi: int) -> int:
        return self._below(hi) - self._below(lo)

    def nth_star(self, i: int) -> Element:
        return (self._nth(i),)

    def star_offsets(self) -> Iterator[Element]:
        if self.stars > LIST_CAP:
            raise CapacityError(f"{self.stars} stars are too many to list")
        for i in range(self.stars):
            yield (self._nth(i),)

    @property
    def size(self) -> int:
        return self.side

    # subclasses: side, stars, _v, _below, _nth, pieces


class FirstTemplate(LineTemplate):
    """x_{1,1}: stars on the first ``stars`` cells, the filler elsewhere."""

    depth = 1

    def __init__(self, side: int, stars: int, fill):
        self.side, self.stars, self.fill = side, stars, fill

    def _v(self, o: int):
        return STAR if o < self.stars else self.fill

    def _below(self, o: int) -> int:
        return min(max(o, 0), self.stars)

    def _nth(self, i: int) -> int:
        return i

    def pieces(self, b: int, n: int):
        cut = min(max(self.stars, b), b + n)
        if cut > b:
            yield ("star", cut - b, None, 0)
        if b + n > cut:
            yield ("fixed", b + n - cut, None, 0)


class WTemplate(LineTemplate):
    """w_{k-1} on [0, side): tile j < R carries star pattern number j over the net,
    every other tile is a verbatim copy of the previous template."""

    def __init__(self, prev: LineTemplate, side: int, count: int, net_points: tuple):
        self.prev, self.side, self.count = prev, side, count
        self.tile = prev.side
        self.points = net_points
        self.base = len(net_points)
        self.depth = prev.depth + 0.5
        self.stars = (side // self.tile - count) * prev.stars

    def _v(self, o: int):
        j, r = divmod(o, self.tile)
        v = self.prev._v(r)
        if v is STAR and j < self.count:
            i = self.prev._below(r)
            return self.points[pattern_digit(j, self.base, self.prev.stars, i)]
        return v

    def _below(self, o: int) -> int:
        if o <= 0:
            return 0
        if o >= self.side:
            return self.stars
        j, r = divmod(o, self.tile)
        if j < self.count:
            return 0
        return (j - self.count) * self.prev.stars + self.prev._below(r)

    def _nth(self, i: int) -> int:
        q, r = divmod(i, self.prev.stars)
        return (self.count + q) * self.tile + self.prev._nth(r)

    def pattern(self, rank: int) -> tuple:
        """Star values of R-tile number ``rank``, in star order."""
        s = self.prev.stars
        return tuple(self.points[pattern_digit(rank, self.base, s, i)] for i in range(s))

    def pieces(self, b: int, n: int):
        end = b + n
        j0 = b // self.tile
        if j0 < self.count:
            stop = min(end, self.count * self.tile)
            yield ("fixed", stop - b, None, 0)
            b = stop
        while b < end:
            j = b // self.tile
            stop = min(end, (j + 1) * self.tile)
            yield ("T", stop - b, self.prev, b - j * self.tile)
            b = stop


class XTemplate(LineTemplate):
    """x_{k,1} on [0, side): w_{k-1} on [0, w.side), level-(k-1) tiles elsewhere,
    with only the first ``keep`` outside stars retained."""

    def __init__(self, prev: LineTemplate, w: WTemplate, side: int, keep: int, fill):
        self.prev, self.w, self.side, self.keep, self.fill = prev, w, side, keep, fill
        self.tile = prev.side
        self.depth = prev.depth + 1
        self.stars = w.stars + keep
        self.candidates = (side - w.side) // self.tile * prev.stars

    def _cand(self, o: int) -> int:
        q, r = divmod(o - self.w.side, self.tile)
        return q * self.prev.stars + self.prev._below(r)

    def _v(self, o: int):
        if o < self.w.side:
            return self.w._v(o)
        v = self.prev._v(o % self.tile)
        if v is STAR and self._cand(o) >= self.keep:
            return self.fill
        return v

    def _below(self, o: int) -> int:
        if o <= self.w.side:
            return self.w._below(o)
        return self.w.stars + min(self.keep, self._cand(min(o, self.side)))

    def _nth(self, i: int) -> int:
        if i < self.w.stars:
            return self.w._nth(i)
        q, r = divmod(i - self.w.stars, self.prev.stars)
        return self.w.side + q * self.tile + self.prev._nth(r)

    @property
    def trim_start(self) -> int:
        """First offset whose outside stars are all trimmed."""
        if self.keep >= self.candidates:
            return self.side
        return self._nth(self.w.stars + self.keep)

    def pieces(self, b: int, n: int):
        end = b + n
        if b < self.w.side:
            stop = min(end, self.w.side)
            yield ("T", stop - b, self.w, b)
            b = stop
        cut = self.trim_start
        while b < min(end, cut):
            j = b // self.tile
            stop = min(end, cut, (j + 1) * self.tile)
            yield ("T", stop - b, self.prev, b - j * self.tile)
            b = stop
        if b < end:
            yield ("fixed", end - b, None, 0)


class Overridden:
    """A template with a few cells replaced; used for corrupted negative controls."""

    def __init__(self, base, overrides: dict):
        self.base, self.overrides = base, dict(overrides)
        self.side, self.stars, self.dim = base.side, base.stars, base.dim
        self.depth = getattr(base, "depth", 0)

    def value(self, offset):
        if offset in self.overrides:
            return self.overrides[offset]
        return self.base.value(offset)

    def is_star(self, offset) -> bool:
        return self.value(offset) is STAR

    def star_index(self, offset) -> int:
        return self.base.star_index(offset)

    def star_offsets(self):
        return (o for o in self.base.star_offsets() if self.value(o) is STAR)

    @property
    def size(self) -> int:
        return self.side ** self.dim


# --- tables ---------------------------------------------------------------------


class TableTemplate:
    """A fully materialized template over [0, side)^d."""

    def __init__(self, side: int, dim: int, cells: dict):
        self.side, self.dim, self.cells = side, dim, cells
        self.order = enumeration_sorted(o for o, v in cells.items() if v is STAR)
        self._index = {o: i for i, o in enumerate(self.order)}
        self.stars = len(self.order)

    @property
    def size(self) -> int:
        return self.side ** self.dim

    def value(self, offset):
        return self.cells[offset]

    def is_star(self, offset) -> bool:
        return self.cells[offset] is STAR

    def star_index(self, offset) -> int:
        return self._index[offset]

    def nth_star(self, i: int) -> Element:
        return self.order[i]

    def star_offsets(self):
        return iter(self.order)


def _check_table(side: int, dim: int) -> None:
    if side ** dim > TABLE_CAP:
        raise CapacityError(f"shape of {side ** dim} cells is too large to materialize")


def table_first(side: int, dim: int, stars: int, fill) -> TableTemplate:
    _check_table(side, dim)
    order = enumeration_sorted(Window.cube(side, dim))
    cells = {o: (STAR if i < stars else fill) for i, o in enumerate(order)}
    return TableTemplate(side, dim, cells)


def lattice_points(tile: int, side: int, dim: int) -> list[Element]:
    """Centers of the side-``tile`` lattice inside [0, side)^d, in enumeration order."""
    n = side // tile
    _check_table(n, dim)
    return enumeration_sorted(
        tuple(x * tile for x in c) for c in Window.cube(n, dim)
    )


def table_w(prev: TableTemplate, side: int, ranks: dict, net_points: tuple) -> TableTemplate:
    """Build w over [0, side)^d; ``ranks`` maps each R-center to its pattern rank."""
    _check_table(side, prev.dim)
    base = len(net_points)
    cells = {}
    for c in lattice_points(prev.side, side, prev.dim):
        rank = ranks.get(c)
        for o, v in prev.cells.items():
            if v is STAR and rank is not None:
                v = net_points[pattern_digit(rank, base, prev.stars, prev.star_index(o))]
            cells[add(c, o)] = v
    return TableTemplate(side, prev.dim, cells)


def table_x(prev: TableTemplate, w: TableTemplate, side: int, keep: int, fill) -> TableTemplate:
    _check_table(side, prev.dim)
    cells = {}
    outside = []
    for pos in Window.cube(side, prev.dim):
        if all(x < w.side for x in pos):
            cells[pos] = w.cells[pos]
            continue
        v = prev.cells[tuple(x % prev.side for x in pos)]
        cells[pos] = v
        if v is STAR:
            outside.append(pos)
    outside.sort(key=index_of)
    for pos in outside[keep:]:
        cells[pos] = fill
    return TableTemplate(side, prev.dim, cells)


# --- star-pattern comparison -------------------------------------------------------


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def tick(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise CapacityError("star-pattern comparison exceeded its work budget")


def star_mismatch(A, a: int, B, b: int, n: int, budget: int = 1 << 20) -> tuple[int, int]:
    """Compare star positions of A on [a, a+n) with B on [b, b+n) (d = 1).

    Returns (missing, extra): cells starred in A but not in B, and cells starred
    in B but not in A. Structurally identical sub-ranges are matched without
    visiting cells, so comparisons across 2^60-cell templates stay cheap.
    """
    return _cmp(A, a, B, b, n, _Budget(budget))


def _cellwise(A, a, B, b, n, budget):
    budget.tick(n)
    missing = extra = 0
    for i in range(n):
        sa = A.value((a + i,)) is STAR
        sb = B.value((b + i,)) is STAR
        missing += sa and not sb
        extra += sb and not sa
    return missing, extra


def _cmp(A, a, B, b, n, budget):
    if n <= 0 or (A is B and a == b):
        return 0, 0
    budget.tick()
    structured = hasattr(A, "pieces") and hasattr(B, "pieces")
    if n <= CELLWISE or not structured:
        return _cellwise(A, a, B, b, n, budget)
    swap = A.depth > B.depth
    src, start = (A, a) if swap else (B, b)
    missing = extra = 0
    pos = 0
    for kind, length, sub, off in src.pieces(start, n):
        if swap:
            if kind == "T":
                m, e = _cmp(sub, off, B, b + pos, length, budget)
            elif kind == "star":
                m, e = length - B.stars_between(b + pos, b + pos + length), 0
            else:
                m, e = 0, B.stars_between(b + pos, b + pos + length)
        else:
            if kind == "T":
                m, e = _cmp(A, a + pos, sub, off, length, budget)
            elif kind == "star":
                m, e = 0, length - A.stars_between(a + pos, a + pos + length)
            else:
                m, e = A.stars_between(a + pos, a + pos + length), 0
        missing += m
        extra += e
        pos += length
    return missing, extra
