"""
Bracketing the mean dimension
=============================

Upper bounds come from counting stars on translates of the free set,
lower bounds from the full-rank blocks that the enumeration guarantees.
"""

from fractions import Fraction

from mdimshift import Alphabet, build_construction, geometric_sequence
from mdimshift.analysis import mdim_estimate

seq = geometric_sequence(4)
for t in (Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)):
    state = build_construction(t, Alphabet.interval(0, 1), seq, 2)
    print(f"t = {t}")
    for m in (1, 4, 16, 256):
        est = mdim_estimate(state, 2, m)
        print(f"  m = {m:>3}: {float(est.lower):.5f} <= mdim <= {float(est.upper):.5f}")

# a two-dimensional alphabet doubles both ends
cube = build_construction(Fraction(1, 4), Alphabet.unit_cube(2), seq, 2)
est = mdim_estimate(cube, 2, 16)
print("cube(2), t = 1/4:", est.lower, "<=", "mdim", "<=", est.upper)
