"""ASCII strips for d = 1 and binary PGM images for d = 2."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .alphabet import STAR
from .patch import Patch

RAMP = " .:-=+*#%@"
STAR_GLYPH = "?"


def _level(v, lo: Fraction, hi: Fraction) -> float:
    if hi == lo:
        return 0.0
    x = float((v[0] - lo) / (hi - lo))
    return min(1.0, max(0.0, x))


def ascii_strip(patch: Patch, lo=0, hi=1) -> str:
    """One glyph per cell, darker glyphs for larger first coordinates."""
    if patch.window.dim != 1:
        raise ValueError("ASCII rendering is for one-dimensional windows")
    lo, hi = Fraction(lo), Fraction(hi)
    out = []
    for v in patch.values():
        if v is STAR:
            out.append(STAR_GLYPH)
        else:
            out.append(RAMP[round(_level(v, lo, hi) * (len(RAMP) - 1))])
    return "".join(out)


def pgm_bytes(patch: Patch, lo=0, hi=1) -> bytes:
    """Binary PGM (P5, maxval 255); stars render as mid gray."""
    if patch.window.dim != 2:
        raise ValueError("PGM rendering is for two-dimensional windows")
    lo, hi = Fraction(lo), Fraction(hi)
    (x0, y0), (w, h) = patch.window.lo, patch.window.sides
    img = np.zeros((h, w), dtype=np.uint8)
    for (x, y), v in patch.cells.items():
        img[y - y0, x - x0] = 128 if v is STAR else round(_level(v, lo, hi) * 255)
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
