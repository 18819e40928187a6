from __future__ import annotations

import random
from fractions import Fraction

import pytest

import oracle
from conftest import as_dict, random_graph
from pinkey.exact import CapExceeded
from pinkey.graph import GraphError, Multigraph, figure1, internal_edges
from pinkey.helper import (
    choose_split_partner,
    decomposition_int_packing,
    prop6_bounds,
    reduce_to_spanning,
    thm7_check,
    tight_sets,
    weak_helper_ilp,
    weak_helper_lp,
)
from pinkey.omniscience import int_omn, omn
from pinkey.packing import mu, mu_f

F = Fraction
STAR = Multigraph.from_dict(3, {(1, 3): 1, (2, 3): 1})
LOPSIDED = Multigraph.from_dict(3, {(1, 3): 3, (2, 3): 1})
DOUBLE_STAR = Multigraph.from_dict(3, {(1, 3): 2, (2, 3): 2})
CLAW = Multigraph.from_dict(4, {(1, 4): 1, (2, 4): 1, (3, 4): 1})


def test_weak_helper_lp_star():
    v = weak_helper_lp(STAR)
    assert v.holds and v.witness == (0, 0, 1)


def test_weak_helper_lp_lopsided():
    v = weak_helper_lp(LOPSIDED)
    assert v.holds and v.constrained == 3 and sum(v.witness) == 3 and v.witness[2] <= 2


def test_weak_helper_fails_on_claw():
    # omniscience needs R_4 = 2 > 3/2; with R_4 capped the optimum rises to 9/4
    lp = weak_helper_lp(CLAW)
    assert not lp.holds and lp.unconstrained == 2 and lp.constrained == F(9, 4)
    ilp = weak_helper_ilp(CLAW)
    assert not ilp.holds and ilp.unconstrained == 2 and ilp.constrained == 3
    assert oracle.omn(4, as_dict(CLAW), {1, 2, 3}) == 2


def test_weak_helper_ilp_examples():
    assert weak_helper_ilp(STAR).witness == (0, 0, 1)
    v = weak_helper_ilp(DOUBLE_STAR)
    assert v.holds and v.witness == (0, 0, 2)


def test_requires_single_helper():
    g, _ = figure1()
    with pytest.raises(GraphError):
        tight_sets(g, {1, 5, 6, 7}, [0] * 7)
    with pytest.raises(GraphError):
        weak_helper_lp(Multigraph.from_dict(2, {(1, 2): 1}))


def test_tight_sets_star():
    fam = tight_sets(STAR, {1, 2}, (0, 0, 1))
    assert set(fam.members) == {frozenset({1}), frozenset({2}), frozenset({1, 3}), frozenset({2, 3})}
    assert fam.b_prime == {2, 3} and fam.b_double == {1} and fam.u == 1


def test_tight_sets_slack_and_infeasible():
    fam = tight_sets(STAR, {1, 2}, (1, 1, 2))
    assert all(internal_edges(STAR, B) == 0 for B in fam.members)
    with pytest.raises(GraphError):
        tight_sets(STAR, {1, 2}, (0, 0, 0))


def test_tight_set_family_closure_and_degree_facts():
    rng = random.Random(41)
    for _ in range(40):
        g = random_graph(rng, 3, 5, 3)
        m = g.m
        a = frozenset(range(1, m))
        v = weak_helper_ilp(g)
        fam = tight_sets(g, a, v.witness)
        members = set(fam.members)
        for b1 in members:
            for b2 in members:
                if not a <= (b1 | b2):
                    assert b1 | b2 in members
                    if b1 & b2:
                        assert b1 & b2 in members
        for B, d in fam.d_m.items():
            if m in B:
                assert d >= v.witness[m - 1]
            else:
                assert d <= v.witness[m - 1]


def test_split_partner_examples():
    assert choose_split_partner(STAR, {1, 2}, (0, 0, 1), 1) == 2
    assert choose_split_partner(CLAW, {1, 2, 3}, (0, 1, 1, 1), 1) == 2
    with pytest.raises(GraphError):
        choose_split_partner(Multigraph.from_dict(4, {(1, 2): 1, (2, 4): 1, (3, 4): 1}), {1, 2, 3}, (0, 1, 1, 1), 1)
    with pytest.raises(GraphError):
        choose_split_partner(STAR, {1, 2}, (1, 1, 0), 1)


def test_reduce_star():
    chain = reduce_to_spanning(STAR)
    assert len(chain.steps) == 2
    assert chain.steps[-1].graph.edges == (((1, 2), 1),)
    assert [s.gap for s in chain.steps] == [1, 1] and chain.steps[0].mu == 1
    assert chain.constant and chain.certified and chain.monotone


def test_reduce_double_star():
    chain = reduce_to_spanning(DOUBLE_STAR)
    assert [s.pair for s in chain.steps] == [None, (1, 2), (1, 2)]
    assert chain.steps[-1].graph.edges == (((1, 2), 2),)
    assert all(s.mu == 2 == s.gap for s in chain.steps)


def test_reduce_already_done():
    g = Multigraph.from_dict(3, {(1, 2): 2, (1, 3): 1})
    chain = reduce_to_spanning(g)
    assert len(chain.steps) == 1 and chain.certified


def test_reduce_refuses_strong_helper():
    with pytest.raises(GraphError):
        reduce_to_spanning(CLAW)


def test_prop6_star():
    table = prop6_bounds(STAR)
    assert table.fractional_omn.rhs == 1 == omn(STAR, {1, 2}).value
    assert table.holds


def test_prop6_inner_edges_only():
    g = Multigraph.from_dict(3, {(1, 2): 2, (1, 3): 1})
    table = prop6_bounds(g)
    assert table.fractional_packing.lhs == table.fractional_packing.rhs == 2


def test_box_cap():
    g = Multigraph.from_dict(4, {(1, 2): 3, (1, 3): 3, (2, 3): 3, (3, 4): 1})
    with pytest.raises(CapExceeded):
        decomposition_int_packing(g, cap=10)


@pytest.mark.parametrize("g", [STAR, LOPSIDED, DOUBLE_STAR, CLAW])
def test_thm7_examples(g):
    v = thm7_check(g)
    assert v.fractional_equality and v.integer_equality and v.consistent
    a = range(1, g.m)
    assert v.mu_f == mu_f(g, a)[0] == g.size - omn(g, a).value


def test_random_single_helper_consistency():
    rng = random.Random(42)
    for _ in range(20):
        g = random_graph(rng, 3, 5, 2)
        a = frozenset(range(1, g.m))
        table = prop6_bounds(g)
        assert table.holds
        # integer rhs values are complementary through |E|
        assert table.integer_omn.rhs == g.size - table.integer_packing.rhs
        v = thm7_check(g, table)
        assert v.consistent
        if weak_helper_ilp(g).holds:
            assert mu(g, a)[0] == g.size - int_omn(g, a).value
        if weak_helper_lp(g).holds:
            assert mu_f(g, a)[0] == g.size - omn(g, a).value
