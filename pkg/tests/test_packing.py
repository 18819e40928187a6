from __future__ import annotations

import random
from fractions import Fraction

import pytest

import oracle
from conftest import as_dict, random_graph, random_set
from pinkey.exact import CapExceeded
from pinkey.graph import GraphError, Multigraph, blow_up, complete, figure1, path3, triangle
from pinkey.kernels import backends
from pinkey.omniscience import capacity, nash_williams
from pinkey.packing import (
    FractionalPacking,
    IntegerPacking,
    SteinerTree,
    enumerate_steiner_trees,
    eulerian_lower_bound,
    mu,
    mu_f,
    packing_rate,
)

F = Fraction
STAR = Multigraph.from_dict(3, {(1, 3): 1, (2, 3): 1})


def test_tree_counts():
    g, A = figure1()
    assert len(enumerate_steiner_trees(g, A)) == 62 == len(oracle.steiner_trees(as_dict(g), A))
    assert len(enumerate_steiner_trees(g, A, minimal=True)) == 26
    assert len(enumerate_steiner_trees(complete(4), range(1, 5))) == 16
    assert len(enumerate_steiner_trees(triangle(), {1, 2, 3})) == 3
    assert enumerate_steiner_trees(path3(), {1, 3}) == [SteinerTree(((1, 2), (2, 3)))]


def test_tree_cap():
    with pytest.raises(CapExceeded):
        enumerate_steiner_trees(complete(5), range(1, 6), cap=10)


def test_steiner_tree_checks():
    t = SteinerTree(((1, 2), (2, 3)))
    assert t.is_tree() and t.leaves() == [1, 3] and t.covers({1, 3})
    assert not SteinerTree(((1, 2), (2, 3), (1, 3))).is_tree()
    with pytest.raises(GraphError):
        SteinerTree(((1, 2),)).check(path3(), {1, 3})


@pytest.mark.parametrize(
    "g,A,mu_value,muf_value",
    [
        (triangle(), {1, 2, 3}, 1, F(3, 2)),
        (path3(), {1, 3}, 1, F(1)),
        (STAR, {1, 2}, 1, F(1)),
    ],
)
def test_golden_packings(g, A, mu_value, muf_value):
    val, packing = mu(g, A)
    assert val == mu_value and packing.size == val
    packing.check(g, A)
    frac, fp = mu_f(g, A)
    assert frac == muf_value == fp.value
    fp.check(g, A)
    assert mu_f(g, A, method="full")[0] == muf_value


def test_seven_terminal_fractional():
    g, A = figure1()
    assert mu_f(g, A)[0] == F(9, 5)
    assert mu_f(g, A, method="full")[0] == F(9, 5)
    assert mu(g, A)[0] == 1


def test_packing_rate_climbs_towards_fractional():
    g, A = figure1()
    rows, frac = packing_rate(g, A, 5)
    assert [r[1] for r in rows] == [1, 3, 5, 7, 9]
    assert frac == F(9, 5)
    assert all(r[2] <= frac for r in rows)


def test_blow_up_packings():
    assert mu(triangle(), {1, 2, 3}, n=2)[0] == 3
    assert mu(path3(), {1, 3}, n=2)[0] == 2


def test_disconnected_set_gives_zero():
    g = Multigraph.from_dict(4, {(1, 2): 1, (3, 4): 1})
    assert mu(g, {1, 3}) == (0, IntegerPacking(()))
    assert mu_f(g, {1, 3}) == (0, FractionalPacking(()))


def test_eulerian_bound():
    assert eulerian_lower_bound(triangle(2), {1, 2, 3}) == 2
    assert eulerian_lower_bound(blow_up(path3(), 2), {1, 3}) == 1
    with pytest.raises(GraphError):
        eulerian_lower_bound(path3(), {1, 3})


def test_unknown_method():
    with pytest.raises(ValueError):
        mu_f(triangle(), {1, 2, 3}, method="simplex")


def test_backends_agree_on_seven_terminal():
    g, A = figure1()
    for n in (1, 2, 3):
        vals = {name: mu(g, A, n=n, kernel=k)[0] for name, k in backends().items()}
        assert set(vals.values()) == {2 * n - 1}


def test_random_against_oracle():
    rng = random.Random(21)
    for _ in range(30):
        g = random_graph(rng, 3, 4, 2)
        A = random_set(rng, g.m)
        d = as_dict(g)
        assert mu(g, A)[0] == oracle.mu(d, A)
        assert mu_f(g, A)[0] == oracle.mu_f(d, A)


def test_random_relations():
    rng = random.Random(22)
    for _ in range(25):
        g = random_graph(rng, 3, 5, 3)
        A = random_set(rng, g.m)
        val, packing = mu(g, A)
        packing.check(g, A)
        frac, fp = mu_f(g, A)
        fp.check(g, A)
        assert val <= frac <= capacity(g, A)
        assert mu_f(g, A, method="full")[0] == frac
        if A == frozenset(g.vertices):
            assert val == nash_williams(g)
