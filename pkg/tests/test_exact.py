from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from pinkey.exact import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    CapExceeded,
    LinearProgram,
    brute_force_min,
    enumerate_integer_points,
    solve_ilp,
    solve_lp,
)

F = Fraction


def triangle_program() -> LinearProgram:
    p = LinearProgram([1, 1, 1])
    p.add([1, 1, 0], ">=", 1).add([1, 0, 1], ">=", 1).add([0, 1, 1], ">=", 1)
    return p


def test_single_bound():
    p = LinearProgram([1]).add([1], ">=", 3)
    res = solve_lp(p)
    assert res.status == OPTIMAL and res.value == 3 and res.x == [3]


def test_triangle_lp_and_duals():
    p = triangle_program()
    res = solve_lp(p)
    assert res.value == F(3, 2)
    assert res.x == [F(1, 2)] * 3
    assert res.duals == [F(1, 2)] * 3
    assert p.feasible(res.x)


def test_triangle_ilp_rounds_up():
    res = solve_ilp(triangle_program())
    assert res.status == OPTIMAL and res.value == 2
    assert all(v.denominator == 1 for v in res.x)


def test_infeasible_and_unbounded():
    p = LinearProgram([1]).add([1], ">=", 1).add([-1], ">=", 0)
    assert solve_lp(p).status == INFEASIBLE
    assert solve_ilp(p).status == INFEASIBLE
    q = LinearProgram([1], sense="max").add([1], ">=", 1)
    assert solve_lp(q).status == UNBOUNDED


def test_max_sense_equality_and_lower_bounds():
    p = LinearProgram([3, 2], sense="max", lower=[1, 0])
    p.add([1, 1], "<=", 4).add([1, -1], "==", 1)
    res = solve_lp(p)
    assert res.value == F(21, 2) and res.x == [F(5, 2), F(3, 2)]


def test_ilp_two_variables():
    p = LinearProgram([1, 1]).add([1, 1], ">=", 3)
    assert solve_ilp(p).value == 3


def test_integer_points_small_box():
    p = LinearProgram([1, 1]).add([1, 1], ">=", 1)
    assert list(enumerate_integer_points(p, [(0, 1), (0, 1)])) == [(0, 1), (1, 0), (1, 1)]
    q = LinearProgram([1]).add([1], ">=", 5)
    assert list(enumerate_integer_points(q, [(0, 2)])) == []


def test_integer_points_triangle_box():
    pts = list(enumerate_integer_points(triangle_program(), [(0, 2)] * 3))
    by_hand = [x for x in itertools.product(range(3), repeat=3)
               if x[0] + x[1] >= 1 and x[0] + x[2] >= 1 and x[1] + x[2] >= 1]
    assert pts == by_hand and len(pts) == 20
    assert brute_force_min(triangle_program(), [(0, 2)] * 3)[0] == 2


def test_box_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_integer_points(triangle_program(), [(0, 99)] * 3, limit=1000))


def test_node_limit():
    with pytest.raises(CapExceeded):
        solve_ilp(triangle_program(), node_limit=1)


def test_rhs_scaling():
    for n in range(1, 5):
        p = LinearProgram([1, 1, 1])
        p.add([1, 1, 0], ">=", n).add([1, 0, 1], ">=", n).add([0, 1, 1], ">=", 2 * n)
        assert solve_lp(p).value == n * F(2)


rows3 = st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=5)


@given(rows3, st.lists(st.integers(0, 4), min_size=5, max_size=5), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_lp_matches_vertex_enumeration(rows, rhs, cost):
    rows = [r for r in rows if any(r)] or [[1, 0, 0]]
    rhs = rhs[: len(rows)]
    p = LinearProgram(cost)
    for r, b in zip(rows, rhs):
        p.add(r, ">=", b)
    res = solve_lp(p)
    assert res.status == OPTIMAL
    assert p.feasible(res.x) and p.value(res.x) == res.value
    assert res.value == oracle.lp_min_by_vertices(cost, rows, rhs)
    # strong duality on the >= rows with nonnegative multipliers
    assert all(y >= 0 for y in res.duals)
    assert sum(y * b for y, b in zip(res.duals, rhs)) == res.value


@given(rows3, st.lists(st.integers(0, 4), min_size=5, max_size=5), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_ilp_matches_enumeration(rows, rhs, cost):
    rows = [r for r in rows if any(r)] or [[1, 0, 0]]
    rhs = rhs[: len(rows)]
    p = LinearProgram(cost)
    for r, b in zip(rows, rhs):
        p.add(r, ">=", b)
    box = [(0, 4)] * 3
    res = solve_ilp(p, bounds=box)
    best, _ = brute_force_min(p, box)
    assert res.value == best
    assert res.value >= solve_lp(p).value
