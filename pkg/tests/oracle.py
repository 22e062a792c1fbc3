"""Brute-force reference for the d = 1 construction.

Templates are plain Python lists and star patterns come from itertools.product,
so nothing here shares code with the package's closed-form templates.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

STAR = "*"


def grid(lo, hi, n):
    """Dyadic grid of spacing (hi - lo)/2^n, as 1-tuples."""
    lo, hi = Fraction(lo), Fraction(hi)
    return [(lo + (hi - lo) * Fraction(j, 2 ** n),) for j in range(2 ** n + 1)]


def count(t, size):
    t = Fraction(t)
    c = 1
    while Fraction(c, size) <= t:
        c += 1
    return c


def build(t, sides, steps, nets, q0, n1=1):
    """Return a list of dicts with keys level, side, x (list), l, h, R."""
    t = Fraction(t)
    side = sides[n1 - 1]
    s = count(t, side)
    x = [STAR] * s + [q0] * (side - s)
    out = [dict(level=n1, side=side, x=x)]
    H = 0
    g_list = [0, 1, -1, 2, -2, 3, -3]
    for k in range(2, steps + 1):
        prev = out[-1]
        px, Lp = prev["x"], prev["side"]
        star_pos = [i for i, v in enumerate(px) if v == STAR]
        net = nets(k - 1)
        patterns = list(product(net, repeat=len(star_pos)))
        R = len(patterns)
        l = prev["level"] + 1
        while sides[l - 1] // Lp < R + 1:
            l += 1
        Ll = sides[l - 1]
        w = []
        for j in range(Ll // Lp):
            tile = list(px)
            if j < R:
                for pos, val in zip(star_pos, patterns[j]):
                    tile[pos] = val
            w.extend(tile)
        h = R * Lp
        H += h
        copy = w.count(STAR)
        n = max(l, prev["level"] + 1)
        while True:
            L = sides[n - 1]
            outside = (L - Ll) // Lp * len(star_pos)
            if 0 <= g_list[k - 2] + H < L and Fraction(outside, L) > t and copy <= count(t, L):
                break
            n += 1
        L = sides[n - 1]
        x = list(w) + [px[i % Lp] for i in range(Ll, L)]
        keep = count(t, L) - copy
        seen = 0
        for i in range(Ll, L):
            if x[i] == STAR:
                if seen >= keep:
                    x[i] = q0
                seen += 1
        out.append(dict(level=n, side=L, x=x, l=l, h=h, R=R, w=w))
    return out


def z_at(records, p):
    x = records[-1]["x"]
    return x[p % len(x)]
