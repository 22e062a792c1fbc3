"""Alphabets K, their dyadic nets, the star symbol and the shift-space metrics.

Points of K are tuples of Fractions (length 1 for intervals and finite sets).
Every base metric is the sup metric on coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import ConfigError, UnsupportedAlphabet
from .lattice import index_of


class _Star:
    __slots__ = ()

    def __repr__(self) -> str:
        return "*"

    def __reduce__(self):
        return "STAR"


STAR = _Star()


def is_star(v) -> bool:
    return v is STAR


def point(*coords) -> tuple:
    return tuple(Fraction(c) for c in coords)


def as_point(v) -> tuple:
    if isinstance(v, tuple):
        return tuple(Fraction(c) for c in v)
    return (Fraction(v),)


@dataclass(frozen=True)
class Alphabet:
    kind: str                 # "cube", "interval", "finite" or "generic"
    m: int = 1                # coordinates per point
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)
    count: int = 0            # number of points for finite alphabets
    dim: int = 1
    additive: bool = True     # dim(K^n) = n·dim(K)

    @classmethod
    def unit_cube(cls, m: int) -> "Alphabet":
        if m < 1:
            raise ConfigError("cube dimension must be positive")
        return cls("cube", m, Fraction(0), Fraction(1), 0, m)

    @classmethod
    def interval(cls, a, b) -> "Alphabet":
        a, b = Fraction(a), Fraction(b)
        if b < a:
            raise ConfigError(f"interval [{a}, {b}] is empty")
        return cls("interval", 1, a, b, 0, 1 if a < b else 0)

    @classmethod
    def finite_set(cls, k: int) -> "Alphabet":
        if k < 1:
            raise ConfigError("a finite alphabet needs at least one point")
        return cls("finite", 1, Fraction(0), Fraction(k - 1), k, 0)

    @property
    def base_point(self) -> tuple:
        """The least net point, used as the filler value q0."""
        return (self.lo,) * self.m

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, p) -> bool:
        p = as_point(p)
        if len(p) != self.m:
            return False
        if self.kind == "finite":
            return p[0].denominator == 1 and 0 <= p[0] < self.count
        return all(self.lo <= c <= self.hi for c in p)

    def describe(self) -> str:
        if self.kind == "cube":
            return f"cube:{self.m}"
        if self.kind == "interval":
            return f"interval:{self.lo}:{self.hi}"
        if self.kind == "finite":
            return f"finite:{self.count}"
        return f"generic:{self.dim}"


def parse_alphabet(desc: str) -> Alphabet:
    """Parse ``cube:m``, ``interval:a:b`` (rationals allowed) or ``finite:k``."""
    parts = desc.strip().split(":")
    try:
        if parts[0] == "cube" and len(parts) == 2:
            return Alphabet.unit_cube(int(parts[1]))
        if parts[0] == "interval" and len(parts) == 3:
            return Alphabet.interval(Fraction(parts[1]), Fraction(parts[2]))
        if parts[0] == "finite" and len(parts) == 2:
            return Alphabet.finite_set(int(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad alphabet descriptor {desc!r}: {exc}") from None
    raise ConfigError(f"bad alphabet descriptor {desc!r}")


@dataclass(frozen=True)
class DenseNet:
    level: int
    mesh: Fraction            # delta_n
    points: tuple             # ascending (lexicographic for cubes)

    def __len__(self) -> int:
        return len(self.points)

    def index(self, p) -> int:
        return self.points.index(as_point(p))

    def nearest(self, p) -> int:
        """Index of the net point closest to p in the sup metric (ties go low)."""
        p = as_point(p)
        best, best_d = 0, None
        for i, q in enumerate(self.points):
            d = point_distance(p, q)
            if best_d is None or d < best_d:
                best, best_d = i, d
        return best


@lru_cache(maxsize=None)
def dense_net(alphabet: Alphabet, n: int) -> DenseNet:
    """Dyadic grid of spacing 2^-n (scaled to the alphabet), mesh 2^-(n+1)."""
    if n < 1:
        raise ValueError("net levels start at 1")
    if alphabet.kind == "finite":
        raise UnsupportedAlphabet("finite alphabets are their own net")
    if alphabet.kind == "generic":
        raise UnsupportedAlphabet("no canonical net for a generic alphabet")
    steps = 1 << n
    axis = tuple(alphabet.lo + alphabet.diameter * Fraction(j, steps) for j in range(steps + 1))
    if alphabet.diameter == 0:
        axis = (alphabet.lo,)
    points = tuple(product(axis, repeat=alphabet.m))
    return DenseNet(n, Fraction(1, 2 << n), points)


def net_for(alphabet: Alphabet, n: int, skeleton: bool = False) -> DenseNet:
    """The net K_n the construction draws star fillings from."""
    if skeleton:
        return DenseNet(n, Fraction(1, 2 << n), (alphabet.base_point,))
    if alphabet.kind == "finite":
        pts = tuple((Fraction(j),) for j in range(alphabet.count))
        return DenseNet(n, Fraction(0), pts)
    return dense_net(alphabet, n)


def covering_radius(net: DenseNet, alphabet: Alphabet) -> Fraction:
    """Largest distance from a point of K to the net (exact, grid nets only)."""
    if alphabet.kind == "finite" or len(net) == 1 and alphabet.diameter == 0:
        return Fraction(0)
    axis = sorted({p[0] for p in net.points})
    gaps = [b - a for a, b in zip(axis, axis[1:])]
    edge = max(axis[0] - alphabet.lo, alphabet.hi - axis[-1])
    return max([g / 2 for g in gaps] + [edge])


# --- metrics -----------------------------------------------------------------


def point_distance(p, q) -> Fraction:
    p, q = as_point(p), as_point(q)
    if len(p) != len(q):
        raise ValueError("points of different dimension")
    return max(abs(a - b) for a, b in zip(p, q))


def sup_metric(x: Sequence, y: Sequence) -> Fraction:
    """d_inf on K^m: the largest entrywise distance between two tuples of points."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not x:
        return Fraction(0)
    return max(point_distance(a, b) for a, b in zip(x, y))


@dataclass(frozen=True)
class MetricWeights:
    """alpha_g = 2^-(index(g) - 1): alpha_e = 1 and the weights sum to 2."""

    def weight(self, g) -> Fraction:
        return Fraction(1, 1 << (index_of(g) - 1))

    @property
    def total(self) -> Fraction:
        return Fraction(2)

    def tail(self, n: int) -> Fraction:
        """Total weight of the elements with index > n."""
        return Fraction(1, 1 << (n - 1)) if n >= 1 else Fraction(2)

    def mass(self, cells: Iterable) -> Fraction:
        return sum((self.weight(g) for g in cells), Fraction(0))


WEIGHTS = MetricWeights()


def ambient_distance(p, q, weights: MetricWeights = WEIGHTS) -> Fraction:
    """D(p, q) truncated to the common window: sum of alpha_g d(p_g, q_g)."""
    if p.window != q.window:
        raise ValueError("patches live on different windows")
    total = Fraction(0)
    for g in p.window:
        a, b = p[g], q[g]
        if a is STAR or b is STAR:
            raise ValueError(f"star at {g}: the ambient metric needs K-valued cells")
        if a != b:
            total += weights.weight(g) * point_distance(a, b)
    return total


def orbit_metric(p, q, F: Iterable, weights: MetricWeights = WEIGHTS) -> Fraction:
    """rho_F(p, q) = max over g in F of the truncated D between g-translates."""
    from .patch import translate_patch

    F = list(F)
    if not F:
        raise ValueError("F must be nonempty")
    best = Fraction(0)
    for g in F:
        if g not in p.window:
            raise ValueError(f"window {p.window} does not cover the translate by {g}")
        best = max(best, ambient_distance(translate_patch(p, g), translate_patch(q, g), weights))
    return best


def mdim_full_shift(alphabet: Alphabet) -> Fraction:
    """mdim(K^G) = lim dim(K^n)/n, evaluated for dimension-additive alphabets."""
    if not alphabet.additive:
        raise UnsupportedAlphabet(
            f"{alphabet.describe()} is not dimension-additive; mdim(K^G) is not evaluated"
        )
    return Fraction(alphabet.dim)


def widim_lower_bound(alphabet: Alphabet, m: int) -> int:
    """m·(dim K - 1), clamped at 0: the small-eps lower bound for Widim of K^m."""
    if m < 1:
        raise ValueError("m must be positive")
    return max(0, m * (alphabet.dim - 1))
