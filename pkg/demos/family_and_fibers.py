"""
Interval families and fiber points
==================================

For a target r the smallest n with r_n > r picks the subshift Y_n; a witness
built with t = r is seen to land in it.  Then a configuration on the first
free set is approximated by a translate of z.
"""

from fractions import Fraction

from mdimshift import Alphabet, build_construction, geometric_sequence, z_patch
from mdimshift.analysis import check_fiber_approximation
from mdimshift.family import FamilyConfig, build_family, build_minimal_witness, classify_window

config = FamilyConfig.default(6)
family = build_family(config)
for y in family.ys:
    print(f"Y_{y.n}: values in [{y.interval.lo}, {y.interval.hi}], {y.stars} stars of {y.size}")

for r in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)):
    w = build_minimal_witness(config, r)
    patch = z_patch(w.state, w.state.step(max(1, w.state.depth - 1)).shape)
    print(f"r = {r}: witness index {w.n}, depth {w.state.depth}, lands in {classify_window(patch, family)}")

state = build_construction(Fraction(1, 4), Alphabet.interval(0, 1), geometric_sequence(4), 3)
u = {(0,): Fraction(1, 3), (1,): Fraction(7, 10)}
res = check_fiber_approximation(state, u, 1, Fraction(1, 2))
print(f"fiber point: level {res.p}, translate with {len(str(res.center[0]))} digits, distance {res.distance}")
