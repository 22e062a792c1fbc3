from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mdimshift.alphabet import (
    STAR,
    WEIGHTS,
    Alphabet,
    ambient_distance,
    covering_radius,
    dense_net,
    mdim_full_shift,
    orbit_metric,
    parse_alphabet,
    point,
    sup_metric,
    widim_lower_bound,
)
from mdimshift.errors import ConfigError, UnsupportedAlphabet
from mdimshift.lattice import Window, enumerate_element
from mdimshift.patch import Patch

I = Alphabet.interval(0, 1)


def test_alphabet_dims():
    assert Alphabet.unit_cube(3).dim == 3
    assert I.dim == 1
    assert Alphabet.interval(1, 1).dim == 0
    assert Alphabet.finite_set(4).dim == 0


def test_parse_alphabet():
    assert parse_alphabet("cube:2") == Alphabet.unit_cube(2)
    assert parse_alphabet("interval:1/2:11/16") == Alphabet.interval(Fr(1, 2), Fr(11, 16))
    assert parse_alphabet("finite:3").count == 3
    for bad in ("cube", "interval:0", "ball:2", "cube:x"):
        with pytest.raises(ConfigError):
            parse_alphabet(bad)


def test_dense_net_examples():
    n1 = dense_net(I, 1)
    assert n1.points == (point(0), point(Fr(1, 2)), point(1))
    assert n1.mesh == Fr(1, 4)
    n2 = dense_net(I, 2)
    assert set(n1.points) <= set(n2.points) and len(n2) == 5
    assert len(dense_net(Alphabet.unit_cube(2), 1)) == 9
    with pytest.raises(UnsupportedAlphabet):
        dense_net(Alphabet.finite_set(2), 1)


@pytest.mark.parametrize("alpha", [I, Alphabet.interval(Fr(1, 2), Fr(11, 16)), Alphabet.unit_cube(2)])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_net_density_and_monotonicity(alpha, n):
    net = dense_net(alpha, n)
    assert covering_radius(net, alpha) <= net.mesh * alpha.diameter
    if n > 1:
        assert set(dense_net(alpha, n - 1).points) <= set(net.points)
    axis = sorted({p[0] for p in net.points})
    for a, b in zip(axis, axis[1:]):
        mid = (a + b) / 2
        assert min(abs(mid - c) for c in axis) <= net.mesh * alpha.diameter


def test_sup_metric_examples():
    assert sup_metric([point(0, 0)], [point(Fr(1, 2), Fr(1, 4))]) == Fr(1, 2)
    x = [point(0), point(1)]
    assert sup_metric(x, x) == 0
    assert sup_metric([point(0), point(1)], [point(Fr(1, 2)), point(1)]) == Fr(1, 2)
    with pytest.raises(ValueError):
        sup_metric([point(0)], [])


def _patch(vals, lo=0):
    return Patch.from_values(Window.interval(lo, lo + len(vals)), vals)


def test_ambient_distance_examples():
    p = _patch([0, 0])
    assert ambient_distance(p, p) == 0
    assert ambient_distance(p, _patch([0, 1])) == Fr(1, 2)
    assert ambient_distance(p, _patch([1, 0])) == 1
    with pytest.raises(ValueError):
        ambient_distance(_patch([STAR, 0]), p)


def test_weights():
    assert WEIGHTS.weight((0,)) == 1
    assert WEIGHTS.weight((1,)) == Fr(1, 2)
    first = [enumerate_element(i) for i in range(1, 11)]
    assert WEIGHTS.mass(first) + WEIGHTS.tail(10) == WEIGHTS.total


@given(st.lists(st.integers(0, 4), min_size=6, max_size=6), st.lists(st.integers(0, 4), min_size=6, max_size=6))
def test_ambient_truncation_monotone(a, b):
    a = [Fr(x, 4) for x in a]
    b = [Fr(x, 4) for x in b]
    small = ambient_distance(_patch(a[1:5], 1), _patch(b[1:5], 1))
    big = ambient_distance(_patch(a, 0), _patch(b, 0))
    assert small <= big
    assert abs(a[0] - b[0]) <= big


def test_orbit_metric_examples():
    p = _patch([0] * 8)
    q = _patch([0, 0, 0, 1, 0, 0, 0, 0])
    assert orbit_metric(p, q, [(0,)]) == ambient_distance(p, q)
    assert orbit_metric(p, p, [(0,), (1,)]) == 0
    assert orbit_metric(p, q, [(0,), (1,), (2,), (3,)]) == 1
    assert orbit_metric(p, q, [(0,), (2,)]) >= ambient_distance(p, q)


def test_mdim_formulas():
    assert mdim_full_shift(Alphabet.unit_cube(3)) == 3
    assert mdim_full_shift(Alphabet.interval(0, Fr(3, 8))) == 1
    assert mdim_full_shift(Alphabet.finite_set(5)) == 0
    with pytest.raises(UnsupportedAlphabet):
        mdim_full_shift(Alphabet("generic", 1, dim=2, additive=False))
    assert widim_lower_bound(Alphabet.unit_cube(2), 5) == 5
    assert widim_lower_bound(I, 5) == 0
    assert widim_lower_bound(Alphabet.unit_cube(3), 4) == 8
