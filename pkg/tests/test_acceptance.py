"""Acceptance criteria, one test per criterion, one PASS/FAIL line each.

Reference values come from independent recomputation (brute-force loops, the
list-based oracle, hand-derived constants) rather than from the functions under
test wherever that is feasible.
"""

from __future__ import annotations

import dataclasses
import subprocess
import sys
from fractions import Fraction as Fr
from itertools import product

import pytest

import oracle
from mdimshift.alphabet import STAR, Alphabet, point
from mdimshift.analysis import (
    check_almost_periodic,
    check_enumeration,
    check_fiber_approximation,
    check_nesting,
    density_report,
    fiber_block_check,
    mdim_lower_estimate,
    mdim_upper_estimate,
)
from mdimshift.construction import (
    block_membership,
    build_construction,
    corrupt_template,
    evaluate_z,
    free_sets,
    z_patch,
)
from mdimshift.errors import MdimError, Undetermined
from mdimshift.family import (
    FamilyConfig,
    build_family,
    build_minimal_witness,
    check_family,
    classify_window,
)
from mdimshift.lattice import Window
from mdimshift.patch import Patch
from mdimshift.tiling import TilingLevel, count_shape_tiles, covered_proportion, geometric_sequence

I = Alphabet.interval(0, 1)
SEQ = geometric_sequence(4)
Q0 = point(0)


def report(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def bracket(t, stars, size) -> bool:
    return t < Fr(stars, size) <= t + Fr(1, size)


# 1 ---------------------------------------------------------------------------------


def test_criterion_1_density_bracket(capsys):
    failures = []
    for t in (Fr(0), Fr(1, 4), Fr(1, 2), Fr(2, 3)):
        exact = build_construction(t, I, SEQ, 2, mode="exact")
        for rec in exact.steps:
            stars = sum(rec.template.value(g) is STAR for g in rec.shape)
            if not bracket(t, stars, rec.size):
                failures.append(f"exact t={t} k={rec.k}")
        ref = oracle.build(t, [4 ** i for i in range(1, 8)], 2, lambda n: oracle.grid(0, 1, n), Q0)
        if [r.stars for r in exact.steps] != [o["x"].count(oracle.STAR) for o in ref]:
            failures.append(f"oracle mismatch t={t}")
        try:
            lazy = build_construction(t, I, SEQ, 3, mode="lazy")
        except MdimError as exc:
            failures.append(f"lazy t={t} k=3 not buildable ({type(exc).__name__})")
            continue
        for k in (1, 2, 3):
            fs = free_sets(lazy, k)
            stars = lazy.template(k).stars_between(0, fs.size)
            if not bracket(t, stars, fs.size) or not density_report(lazy).ok:
                failures.append(f"lazy t={t} k={k}")
    report(capsys, 1, not failures, "; ".join(failures) or "all brackets hold exactly")


# 2 ---------------------------------------------------------------------------------


def test_criterion_2_enumeration(capsys):
    s = build_construction(Fr(1, 4), I, SEQ, 2, mode="exact")
    net = [point(0), point(Fr(1, 2)), point(1)]
    w = s.step(2).support.w
    seen = [(w.value((c,)), w.value((c + 1,))) for c in range(0, 36, 4)]
    expected = set(product(net, repeat=2))
    ok = len(seen) == 9 and len(set(seen)) == 9 and set(seen) == expected and check_enumeration(s, 2).ok
    report(capsys, 2, ok, f"{len(set(seen))} distinct patterns of {len(expected)}")


# 3 ---------------------------------------------------------------------------------


def test_criterion_3_almost_periodic(capsys):
    s = build_construction(Fr(1, 4), I, SEQ, 3)
    rep = check_almost_periodic(s, 1, Window.interval(-2048, 2048))
    ref = [evaluate_z(s, (i,)) for i in range(4)]
    direct = all(
        [evaluate_z(s, (c + i,)) for i in range(4)] == ref for c in range(-2048, 2048, 256)
    )
    bad = check_almost_periodic(corrupt_template(s, 3, (258,), Fr(1, 2)), 1)
    ok = rep.ok and rep.gap == 256 and direct and not bad.ok
    report(capsys, 3, ok, f"gap={rep.gap}, centers={rep.centers}, corrupted control ok={bad.ok}")


# 4 ---------------------------------------------------------------------------------


def _cellwise_nesting(state, k, m):
    shift = state.shift(m - 1)[0] - state.shift(k - 1)[0]
    xk, xm = state.step(k), state.step(m)
    if shift < 0 or shift + xk.side > xm.side:
        return False
    return all(
        (xk.template.value((i,)) is STAR) == (xm.template.value((i + shift,)) is STAR)
        for i in range(xk.side)
    )


def test_criterion_4_nesting(capsys):
    lazy = build_construction(Fr(1, 4), I, SEQ, 3)
    skel = build_construction(Fr(1, 4), I, SEQ, 5, mode="skeleton")
    symbolic = check_nesting(lazy).ok and check_nesting(skel).ok
    direct = _cellwise_nesting(lazy, 1, 2) and _cellwise_nesting(lazy, 2, 3)
    direct = direct and all(_cellwise_nesting(skel, k, m) for k, m in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    rec = lazy.step(2)
    broken = dataclasses.replace(rec, support=dataclasses.replace(rec.support, h=(37,)))
    control = dataclasses.replace(lazy, steps=(lazy.steps[0], broken, lazy.steps[2]))
    ok = symbolic and direct and not check_nesting(control).ok
    pairs = len(check_nesting(lazy).pairs) + len(check_nesting(skel).pairs)
    report(capsys, 4, ok, f"{pairs} pairs (lazy depth 3, skeleton depth 5), h_1=37 control rejected")


# 5 ---------------------------------------------------------------------------------


def test_criterion_5_z_consistency(capsys):
    lazy = build_construction(Fr(1, 4), I, SEQ, 3)
    skel = build_construction(Fr(1, 4), I, SEQ, 5, mode="skeleton")
    ok = all(evaluate_z(lazy, g, 2) == evaluate_z(lazy, g, 3) for g in lazy.step(1).shape)
    checked = 0
    for g in lazy.step(2).shape:
        try:
            v = evaluate_z(lazy, g, 2)
        except Undetermined:
            continue
        checked += 1
        ok = ok and v == evaluate_z(lazy, g, 3)
    for k in (1, 2):
        for g in skel.step(k).shape:
            ok = ok and evaluate_z(skel, g, k + 1) == evaluate_z(skel, g, k + 2)
    for state in (lazy, skel):
        for W in (state.step(2).shape, Window.interval(-512, 512)):
            z = z_patch(state, W)
            ok = ok and all(block_membership(z, state, k) for k in range(1, state.depth + 1))
    report(capsys, 5, ok, f"S_n1 via steps 2/3, {checked} determined cells of S_n2, skeleton via k+1/k+2")


# 6 ---------------------------------------------------------------------------------


def test_criterion_6_tile_counts(capsys):
    L4 = TilingLevel(1, 4)
    W = Window.interval(0, 400)
    cov = min(covered_proportion(L4, (g,), W) for g in range(-8, 8))
    brute = min(
        sum(1 for c in range(-8, 400, 4) if 0 <= c + g and c + g + 4 <= 400) * 4 for g in range(4)
    )
    counts = all(
        count_shape_tiles(L4, Window.interval(a, a + 4 * n + 4)) >= n
        for n in range(1, 101)
        for a in range(-8, 8)
    )
    ok = cov > Fr(19, 20) and Fr(brute, 400) == cov and counts
    report(capsys, 6, ok, f"min covered proportion {cov}, tile counts hold for n <= 100")


# 7 ---------------------------------------------------------------------------------


def test_criterion_7_sandwich(capsys):
    t = Fr(1, 4)
    s = build_construction(t, Alphabet.unit_cube(2), SEQ, 2)
    size = s.step(2).size
    upper = mdim_upper_estimate(s, 2)
    lower = mdim_lower_estimate(s, 2, 16)
    formula = upper == (t + Fr(1, size)) * 2
    literal_upper = upper == Fr(65, 128)
    literal_lower = Fr(65, 256) * Fr(31, 16) < lower < Fr(65, 128)
    literal_width = upper - lower <= Fr(2, 256) * 2
    ok = formula and literal_upper and literal_lower and literal_width
    detail = (
        f"|S_n2|={size}, upper={upper} (formula {'holds' if formula else 'fails'}), "
        f"upper==65/128 {literal_upper}, lower={lower} in bracket {literal_lower}, "
        f"width<=1/64 {literal_width}"
    )
    report(capsys, 7, ok, detail)


# 8 ---------------------------------------------------------------------------------


def _distance_by_hand(x: Patch, s, c):
    weights = {0: Fr(1), 1: Fr(1, 2), 2: Fr(1, 8), 3: Fr(1, 32)}   # indices 1, 2, 4, 6
    return sum(
        weights[g] * abs(x[(g,)][0] - evaluate_z(s, (g + c[0],))[0]) for g in range(4)
    )


def test_criterion_8_fiber(capsys):
    s = build_construction(Fr(1, 4), I, SEQ, 3)
    u0 = {(0,): evaluate_z(s, (0,)), (1,): evaluate_z(s, (1,))}
    r0 = check_fiber_approximation(s, u0, 1, Fr(1, 2))
    u1 = {(0,): Fr(1, 3), (1,): Fr(7, 10)}
    r1 = check_fiber_approximation(s, u1, 1, Fr(1, 2))
    h1 = s.step(2).support.h[0]
    ok = (
        r0.distance == 0
        and r1.p == 2
        and r1.center[0] == h1 + r1.rank * s.step(2).side
        and r1.distance < Fr(1, 2)
        and _distance_by_hand(r1.patch, s, r1.center) == r1.distance
        and all(fiber_block_check(s, r1.patch))
        and all(fiber_block_check(s, r0.patch))
    )
    report(capsys, 8, ok, f"identity distance {r0.distance}, perturbed p={r1.p} distance {r1.distance}")


# 9 ---------------------------------------------------------------------------------


def test_criterion_9_family(capsys):
    cfg = FamilyConfig.default(6)
    fam = build_family(cfg)
    ivs = [(1 - Fr(2, 2 ** n), 1 - Fr(1, 2 ** n) - Fr(1, 2 ** (n + 2))) for n in range(1, 7)]
    ok = check_family(cfg).ok and [(iv.lo, iv.hi) for iv in fam.intervals] == ivs
    ok = ok and all(a[1] < b[0] for a, b in zip(ivs, ivs[1:]))
    expected_n = {Fr(0): 1, Fr(1, 4): 1, Fr(1, 2): 2, Fr(9, 10): 4}
    for r, n in expected_n.items():
        w = build_minimal_witness(cfg, r)
        ok = ok and w.n == n and min(m for m in range(1, 7) if 1 - Fr(1, 2 ** m) > r) == n
        for rec in w.state.steps:
            stars = rec.template.stars_between(0, rec.side)
            ok = ok and bracket(r, stars, rec.size)
        K = w.state.depth
        patch = z_patch(w.state, w.state.step(max(1, K - 1)).shape)
        ok = ok and str(classify_window(patch, fam)) == f"Y_{n}"
    ones = Patch.from_values(Window.interval(0, 16), [1] * 16)
    ok = ok and classify_window(ones, fam).kind == "constant-one"
    report(capsys, 9, ok, "disjoint intervals, witnesses n=1,1,2,4 classified into their Y_n")


# 10 --------------------------------------------------------------------------------


def _pipeline(tmp):
    run = lambda *a: subprocess.run([sys.executable, "-m", "mdimshift", *a], capture_output=True, cwd=tmp)  # noqa: E731
    outs = []
    st = str(tmp / "s.json")
    run("build", "--t", "1/4", "--alphabet", "interval:0:1", "--sides", "4,16,64,256", "--steps", "3", "--mode", "lazy", "--out", st)
    outs.append(run("verify", "--state", st).stdout)
    outs.append(run("density", "--state", st).stdout)
    outs.append(run("estimate", "--state", st, "--k", "2").stdout)
    outs.append(run("fiber", "--state", st, "--u", "1/3,7/10").stdout)
    outs.append(run("family", "--r", "0,1/4,1/2,9/10").stdout)
    outs.append(run("render", "--state", st, "--window=-256:256").stdout)
    run("export", "--state", st, "--window=-100:300", "--out", str(tmp / "p.json"))
    return [(tmp / "s.json").read_bytes(), (tmp / "p.json").read_bytes(), *outs]


def test_criterion_10_determinism(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    first, second = _pipeline(a), _pipeline(b)
    ok = first == second and all(first)
    report(capsys, 10, ok, f"{len(first)} artifacts compared byte for byte")
