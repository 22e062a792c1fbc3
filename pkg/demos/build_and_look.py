"""
Building the orbit point and looking at it
==========================================

Each step fixes more cells of a pattern on a larger box and leaves the rest
as stars.  z is read off the last template wherever a cell is fixed.
"""

from fractions import Fraction

import numpy as np

from mdimshift import Alphabet, build_construction, geometric_sequence, z_patch
from mdimshift.analysis import check_almost_periodic, density_report
from mdimshift.lattice import Window
from mdimshift.render import ascii_strip

state = build_construction(Fraction(1, 4), Alphabet.interval(0, 1), geometric_sequence(4), 3)

# star densities sit just above t, within one cell of it; step 3 is far too
# large to store, so only its size in digits is shown
for row in density_report(state).rows:
    excess = (row.ratio - state.t) * row.size
    print(f"step {row.k}: {len(str(row.size)):>2}-digit side, stars exceed t|S| by {float(excess):.3f}")

# 256 cells of z, from light (0) to dark (1)
patch = z_patch(state, Window.interval(0, 256))
print(ascii_strip(patch))

# a float view for quick statistics
values = np.array([float(v[0]) for v in patch.values()])
print("mean value on [0, 256):", values.mean().round(4))

# the first four cells repeat with a bounded gap
rep = check_almost_periodic(state, 1)
print("return gap of the first block:", rep.gap, "over", rep.centers, "centers")
