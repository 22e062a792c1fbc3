"""The acting group Z^d: elements, a fixed enumeration, boxes and Følner predicates.

Group elements are plain tuples of Python ints (arbitrary precision); the group
operation is coordinatewise addition and the identity is the zero tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

Element = tuple  # tuple[int, ...]


def elem(x, d: int | None = None) -> Element:
    """Normalize an int or a sequence of ints to a group element tuple."""
    if isinstance(x, int):
        g = (x,)
    else:
        g = tuple(int(c) for c in x)
    if d is not None and len(g) != d:
        raise ValueError(f"expected a {d}-dimensional element, got {g!r}")
    return g


def identity(d: int = 1) -> Element:
    return (0,) * d


def add(g: Element, h: Element) -> Element:
    return tuple(a + b for a, b in zip(g, h))


def sub(g: Element, h: Element) -> Element:
    return tuple(a - b for a, b in zip(g, h))


def neg(g: Element) -> Element:
    return tuple(-a for a in g)


# --- enumeration -----------------------------------------------------------
#
# Shell r holds the elements of sup-norm r. A coordinate z gets the key
# 0, 1, 2, 3, 4, ... for z = 0, 1, -1, 2, -2, ...; shell r is then the set of key
# tuples in [0, 2r]^d with some key >= 2r - 1, listed lexicographically.


def _key(z: int) -> int:
    return 2 * z - 1 if z > 0 else -2 * z


def _unkey(k: int) -> int:
    return (k + 1) // 2 if k % 2 else -(k // 2)


def _iroot(n: int, d: int) -> int:
    """Largest x >= 0 with x**d <= n."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or d == 1:
        return n
    x = 1 << ((n.bit_length() + d - 1) // d)
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    while x ** d > n:
        x -= 1
    while (x + 1) ** d <= n:
        x += 1
    return x


def _shell_rank(keys: Sequence[int], r: int) -> int:
    big, small = 2 * r + 1, 2 * r - 1
    d = len(keys)
    rank = 0
    hit = False
    for i, y in enumerate(keys):
        rem = d - i - 1
        full = big ** rem
        if hit:
            rank += y * full
        else:
            rank += min(y, small) * (full - small ** rem) + max(0, y - small) * full
        hit = hit or y >= small
    return rank


def _shell_unrank(rank: int, r: int, d: int) -> list[int]:
    big, small = 2 * r + 1, 2 * r - 1
    keys: list[int] = []
    hit = False
    for i in range(d):
        rem = d - i - 1
        full = big ** rem
        if hit:
            y, rank = divmod(rank, full)
        else:
            inner = full - small ** rem
            if rank < small * inner:
                y, rank = divmod(rank, inner)
            else:
                y, rank = divmod(rank - small * inner, full)
                y += small
        keys.append(y)
        hit = hit or y >= small
    return keys


def enumerate_element(index: int, d: int = 1) -> Element:
    """Return g_index, the index-th element of the fixed listing of Z^d (1-based)."""
    if index < 1:
        raise ValueError("enumeration indices start at 1")
    if index == 1:
        return identity(d)
    # smallest r with (2r + 1)^d >= index
    root = _iroot(index - 1, d)
    if root ** d < index:
        root += 1
    r = root // 2
    while (2 * r + 1) ** d < index:
        r += 1
    rank = index - 1 - (2 * r - 1) ** d
    return tuple(_unkey(k) for k in _shell_unrank(rank, r, d))


def index_of(g: Element) -> int:
    """Inverse of :func:`enumerate_element`."""
    g = elem(g)
    r = max(abs(c) for c in g)
    if r == 0:
        return 1
    d = len(g)
    return 1 + (2 * r - 1) ** d + _shell_rank([_key(c) for c in g], r)


# --- windows -----------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """A box prod_i [lo_i, hi_i) in Z^d."""

    lo: Element
    hi: Element

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("window corners differ in dimension")
        if any(b <= a for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty window {self.lo}..{self.hi}")

    @classmethod
    def interval(cls, a: int, b: int) -> "Window":
        return cls((a,), (b,))

    @classmethod
    def cube(cls, side: int, d: int = 1, corner: Element | None = None) -> "Window":
        lo = identity(d) if corner is None else corner
        return cls(lo, tuple(c + side for c in lo))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        n = 1
        for s in self.sides:
            n *= s
        return n

    def __len__(self) -> int:
        return self.size

    def __contains__(self, g) -> bool:
        g = elem(g)
        return all(a <= c < b for a, c, b in zip(self.lo, g, self.hi))

    def __iter__(self) -> Iterator[Element]:
        return iter(product(*(range(a, b) for a, b in zip(self.lo, self.hi))))

    def cells(self) -> Iterator[Element]:
        return iter(self)

    def translate(self, g) -> "Window":
        g = elem(g, self.dim)
        return Window(add(self.lo, g), add(self.hi, g))

    def issubset(self, other: "Window") -> bool:
        return all(
            a2 <= a1 and b1 <= b2
            for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi)
        )

    def intersect(self, other: "Window") -> "Window | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(b <= a for a, b in zip(lo, hi)):
            return None
        return Window(lo, hi)

    def __str__(self) -> str:
        return "x".join(f"[{a},{b})" for a, b in zip(self.lo, self.hi))


def enumeration_sorted(cells: Iterable[Element]) -> list[Element]:
    return sorted(cells, key=index_of)


# --- boundaries and invariance ----------------------------------------------


def boundary_set(F: Window, T: Iterable) -> frozenset:
    """B(F, T): the g whose translate T + g meets both F and its complement."""
    T = [elem(t, F.dim) for t in T]
    if not T:
        raise ValueError("T must be nonempty")
    candidates = set()
    for t in T:
        # T + g meets F only if g lies in F - t for some t
        for c in F.translate(neg(t)):
            candidates.add(c)
    out = set()
    for g in candidates:
        inside = [add(t, g) in F for t in T]
        if any(inside) and not all(inside):
            out.add(g)
    return frozenset(out)


def invariance_ratio(F: Window, T: Iterable) -> Fraction:
    return Fraction(len(boundary_set(F, T)), F.size)


def is_invariant(F: Window, T: Iterable, eps) -> bool:
    """True iff F is (T, eps)-invariant: |B(F,T)| / |F| < eps, compared exactly."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return invariance_ratio(F, T) < eps


def folner_window(n: int, d: int = 1) -> Window:
    """The n-th box [0, n)^d of the canonical Følner sequence."""
    if n < 1:
        raise ValueError("n must be positive")
    return Window.cube(n, d)


def is_syndetic_in_window(S: Iterable, window: Window, F: Iterable) -> bool:
    """Check window ⊆ F + S, the restriction of G = FS to a finite window."""
    S = {elem(s, window.dim) for s in S}
    F = [elem(f, window.dim) for f in F]
    if not S or not F:
        raise ValueError("S and F must be nonempty")
    return all(any(sub(g, f) in S for f in F) for g in window)
