import dataclasses
from fractions import Fraction as Fr

import pytest

from mdimshift.alphabet import Alphabet, point
from mdimshift.analysis import (
    check_almost_periodic,
    check_enumeration,
    check_fiber_approximation,
    check_nesting,
    density_report,
    fiber_block_check,
    fiber_depth,
    mdim_estimate,
    mdim_lower_estimate,
    mdim_upper_estimate,
    upper_classes,
)
from mdimshift.construction import build_construction, corrupt_template, evaluate_z, free_sets
from mdimshift.errors import CapacityError
from mdimshift.lattice import Window
from mdimshift.tiling import geometric_sequence

I = Alphabet.interval(0, 1)
C2 = Alphabet.unit_cube(2)
SEQ = geometric_sequence(4)
LAZY = build_construction(Fr(1, 4), I, SEQ, 3)


def with_h(state, k, h):
    rec = state.step(k)
    bad = dataclasses.replace(rec, support=dataclasses.replace(rec.support, h=h))
    steps = list(state.steps)
    steps[k - 1] = bad
    return dataclasses.replace(state, steps=tuple(steps))


def test_almost_periodic():
    rep = check_almost_periodic(LAZY, 1)
    assert rep.ok and rep.gap == 256 and rep.centers >= 2
    rep2 = check_almost_periodic(LAZY, 1, Window.interval(-2048, 2048))
    assert rep2.ok and rep2.gap == 256
    bad = corrupt_template(LAZY, 3, (258,), Fr(1, 2))
    assert not check_almost_periodic(bad, 1).ok


def test_almost_periodic_skeleton_levels():
    s = build_construction(Fr(1, 4), I, SEQ, 4, mode="skeleton")
    for m in (1, 2):
        rep = check_almost_periodic(s, m)
        assert rep.ok and rep.gap == s.step(m + 1).side


def test_density_report_examples():
    rep = density_report(LAZY)
    assert [r.ratio for r in rep.rows[:2]] == [Fr(1, 2), Fr(65, 256)]
    assert rep.ok
    zero = density_report(build_construction(0, I, SEQ, 2))
    assert zero.rows[0].ratio == Fr(1, 4) == zero.rows[0].bound
    sk = density_report(build_construction(Fr(1, 4), I, SEQ, 4, mode="skeleton"))
    assert len(sk.rows) == 4 and sk.ok


def test_nesting():
    assert check_nesting(LAZY).ok
    assert check_nesting(build_construction(Fr(1, 4), I, SEQ, 5, mode="skeleton")).ok
    assert check_nesting(build_construction(Fr(1, 4), I, SEQ, 1)).ok
    bad = check_nesting(with_h(LAZY, 2, (37,)))
    assert not bad.ok
    assert any(p.missing for p in bad.pairs)


def test_nesting_exact_2d():
    from mdimshift.tiling import build_box_sequence

    s = build_construction(Fr(1, 4), Alphabet.finite_set(2), build_box_sequence((2, 4, 8, 16, 32), d=2), 2, mode="exact")
    assert check_nesting(s).ok


def test_enumeration_exact():
    e = build_construction(Fr(1, 4), I, SEQ, 2, mode="exact")
    rep = check_enumeration(e, 2)
    assert rep.ok and rep.count == rep.distinct == rep.expected == 9


def test_upper_estimate_examples():
    one = build_construction(Fr(1, 4), I, SEQ, 1)
    W = Window.interval(0, 40)
    values = {c.residue: c.value for c in upper_classes(one, 1, W)}
    assert values[(0,)] == Fr(1, 2) and values[(2,)] == Fr(11, 20)
    assert mdim_upper_estimate(one, 1, W) == Fr(11, 20)
    assert mdim_upper_estimate(one, 1, Window.interval(0, 4 * 10**6), [(0,)]) == Fr(1, 2)
    cube = build_construction(Fr(1, 4), C2, SEQ, 1)
    assert mdim_upper_estimate(cube, 1, W) == Fr(11, 10)


def test_upper_estimate_aligned_formula():
    for state in (LAZY, build_construction(Fr(1, 4), C2, SEQ, 2)):
        for k in range(1, state.depth + 1):
            rec = state.step(k)
            dimK = state.alphabet.dim
            assert mdim_upper_estimate(state, k) == (state.t + Fr(1, rec.size)) * dimK


def test_lower_estimate_examples():
    cube = build_construction(Fr(1, 4), C2, SEQ, 2)
    ratio = free_sets(cube, 2).ratio
    assert mdim_lower_estimate(cube, 2, 4) == ratio * Fr(7, 4)
    assert mdim_lower_estimate(LAZY, 2, 1) == 0
    seq = [mdim_lower_estimate(cube, 2, m) for m in (1, 2, 4, 16, 1024)]
    assert seq == sorted(seq) and seq[-1] < ratio * 2


def test_lower_below_upper():
    for state in (LAZY, build_construction(Fr(1, 4), C2, SEQ, 2)):
        for k in range(1, state.depth + 1):
            dimK = state.alphabet.dim
            slack = Fr(dimK, state.step(k).size)
            for m in range(1, 17):
                est = mdim_estimate(state, k, m)
                assert est.ok and est.slack == 0
                assert est.lower < est.upper + slack


def test_fiber_identity_and_perturbed():
    J1 = free_sets(LAZY, 1).J_cells()
    u = {g: evaluate_z(LAZY, g) for g in J1}
    res = check_fiber_approximation(LAZY, u, 1, Fr(1, 2))
    assert res.distance == 0 and res.p == 2
    res2 = check_fiber_approximation(LAZY, {(0,): 1, (1,): 1}, 1, Fr(1, 2))
    assert res2.ok and res2.center[0] == 36 + res2.rank * 256
    res3 = check_fiber_approximation(LAZY, {(0,): Fr(1, 3), (1,): Fr(7, 10)}, 1, Fr(1, 2))
    assert 0 < res3.distance < Fr(1, 2)
    for r in (res, res2, res3):
        assert all(fiber_block_check(LAZY, r.patch))


def test_fiber_depth_and_capacity():
    assert fiber_depth(LAZY, 1, Fr(1, 2)) == 2
    assert fiber_depth(LAZY, 1, Fr(1, 100)) > 2
    two = build_construction(Fr(1, 4), I, SEQ, 2)
    with pytest.raises(CapacityError, match="insufficient depth"):
        check_fiber_approximation(two, {(0,): 0, (1,): 0}, 1, Fr(1, 2))
    big = check_fiber_approximation(LAZY, {(0,): 0, (1,): 1}, 1, Fr(5))
    assert big.ok
