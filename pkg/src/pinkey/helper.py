"""Single-helper analysis: ``A = {1..m-1}`` and one helper terminal ``m``.

Covers weak-helper tests, tight constraint sets, the edge-splitting
reduction that certifies tree packing optimality, and the fractional
decomposition bounds comparing a graph with a split into an ``A``-part
and its complement.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import CapExceeded, LinearProgram, OPTIMAL, solve_ilp, solve_lp
from .graph import (
    GraphError,
    Multigraph,
    degree,
    enumerate_constraint_sets,
    induced,
    internal_edges,
    split_off,
)
from .omniscience import int_omn, nash_williams, omn, omniscience_program
from .packing import enumerate_steiner_trees, mu, mu_f

DEFAULT_BOX_CAP = 4096


def helper_set(g: Multigraph, A: Iterable[int] | None = None) -> tuple[frozenset[int], int]:
    """Return ``(A, m)`` after checking that ``m`` is the only helper."""
    full = frozenset(range(1, g.m))
    if A is not None and frozenset(A) != full:
        extra = g.m - len(frozenset(A))
        raise GraphError(f"single-helper analysis needs A = 1..{g.m - 1}; got {extra} helpers")
    if g.m < 3:
        raise GraphError("single-helper analysis needs at least 3 terminals")
    return full, g.m


def _helper_degree(g: Multigraph, m: int) -> int:
    return degree(g, m)


def _a_neighbours(g: Multigraph, a: frozenset[int], m: int) -> list[int]:
    return [i for i in sorted(a) if g.e(i, m) > 0]


# -- weak helper --------------------------------------------------------------


@dataclass(frozen=True)
class WeakHelperVerdict:
    holds: bool
    witness: tuple
    constrained: Fraction
    unconstrained: Fraction


def weak_helper_lp(g: Multigraph) -> WeakHelperVerdict:
    """Can an optimal omniscience rate vector keep ``R_m <= d_m / 2``?"""
    a, m = helper_set(g)
    base = omn(g, a).value
    p = omniscience_program(g, a)
    p.add([0] * (m - 1) + [1], "<=", Fraction(_helper_degree(g, m), 2))
    res = solve_lp(p)
    assert res.status == OPTIMAL
    return WeakHelperVerdict(res.value == base, tuple(res.x), res.value, base)


def weak_helper_ilp(g: Multigraph) -> WeakHelperVerdict:
    """Integer analogue with ``I_m <= floor(d_m / 2)``."""
    a, m = helper_set(g)
    base = int_omn(g, a).value
    p = omniscience_program(g, a)
    bounds = [(0, degree(g, i)) for i in g.vertices]
    bounds[m - 1] = (0, _helper_degree(g, m) // 2)
    res = solve_ilp(p, bounds=bounds)
    if res.status != OPTIMAL:
        return WeakHelperVerdict(False, (), Fraction(-1), Fraction(base))
    return WeakHelperVerdict(res.value == base, tuple(int(v) for v in res.x), res.value, Fraction(base))


# -- tight sets and edge splitting --------------------------------------------


@dataclass(frozen=True)
class TightSetFamily:
    members: tuple[frozenset[int], ...]
    b_prime: frozenset[int]
    b_double: frozenset[int]
    d_m: dict
    u: int | None


def tight_sets(g: Multigraph, A: Iterable[int], lengths: Iterable[int], u: int | None = None) -> TightSetFamily:
    """Constraint sets met with equality by ``lengths``.

    ``b_prime`` is the intersection of tight sets avoiding ``u`` and
    containing the helper; ``b_double`` the union of tight sets containing
    ``u`` but not the helper.  Either is empty when no set qualifies.
    """
    a, m = helper_set(g, A)
    lengths = list(lengths)
    if len(lengths) != g.m:
        raise GraphError(f"need {g.m} lengths, got {len(lengths)}")
    members = []
    for B in enumerate_constraint_sets(g.m, a):
        lhs = sum(lengths[i - 1] for i in B)
        rhs = internal_edges(g, B)
        if lhs < rhs:
            raise GraphError(f"lengths violate the constraint for {sorted(B)}: {lhs} < {rhs}")
        if lhs == rhs:
            members.append(B)
    if u is None:
        nb = _a_neighbours(g, a, m)
        u = nb[0] if nb else None
    b_prime: frozenset[int] = frozenset()
    b_double: frozenset[int] = frozenset()
    if u is not None:
        avoid = [B for B in members if u not in B and m in B]
        if avoid:
            b_prime = frozenset.intersection(*avoid)
        hold = [B for B in members if u in B and m not in B]
        if hold:
            b_double = frozenset.union(*hold)
    d_m = {B: sum(g.e(i, m) for i in B & a) for B in members}
    return TightSetFamily(tuple(members), b_prime, b_double, d_m, u)


def choose_split_partner(g: Multigraph, A: Iterable[int], lengths: Iterable[int], u: int | None = None) -> int:
    """Partner ``v`` such that splitting ``(u, m), (v, m)`` keeps ``lengths`` optimal after ``I_m -= 1``."""
    a, m = helper_set(g, A)
    lengths = list(lengths)
    nb = _a_neighbours(g, a, m)
    if len(nb) < 2:
        raise GraphError(f"helper {m} touches fewer than two terminals of A")
    if not 0 < lengths[m - 1] <= _helper_degree(g, m) // 2:
        raise GraphError(f"helper length {lengths[m - 1]} outside 1..{_helper_degree(g, m) // 2}")
    if u is None:
        u = nb[0]
    if u not in nb:
        raise GraphError(f"terminal {u} is not connected to helper {m}")
    fam = tight_sets(g, a, lengths, u)
    if fam.b_prime:
        pool = [v for v in nb if v in fam.b_prime and v not in fam.b_double and v != u]
    else:
        pool = [v for v in nb if v != u and v not in fam.b_double]
    if not pool:
        raise GraphError(f"no split partner for u={u}")
    return pool[0]


@dataclass(frozen=True)
class SplitStep:
    graph: Multigraph
    pair: tuple[int, int] | None
    lengths: tuple[int, ...]
    gap: int
    mu: int


@dataclass(frozen=True)
class SplitChain:
    steps: tuple[SplitStep, ...]

    @property
    def constant(self) -> bool:
        return len({s.gap for s in self.steps}) == 1

    @property
    def monotone(self) -> bool:
        return all(x.mu >= y.mu for x, y in zip(self.steps, self.steps[1:]))

    @property
    def certified(self) -> bool:
        """The first graph's packing number equals its ``|E| - INT`` value."""
        first = self.steps[0]
        return first.mu == first.gap


def reduce_to_spanning(g: Multigraph) -> SplitChain:
    """Split helper edges until the helper length is zero or it touches one terminal of ``A``."""
    a, m = helper_set(g)
    verdict = weak_helper_ilp(g)
    if not verdict.holds:
        raise GraphError("weak helper condition fails; the reduction does not apply")
    lengths = list(verdict.witness)
    cur = g
    steps = []
    pair = None
    while True:
        val = int_omn(cur, a).value
        if sum(lengths) != val:
            raise AssertionError(f"lengths {lengths} are not optimal after splitting {pair}")
        steps.append(SplitStep(cur, pair, tuple(lengths), cur.size - val, mu(cur, a)[0]))
        if lengths[m - 1] == 0 or len(_a_neighbours(cur, a, m)) <= 1:
            break
        u = _a_neighbours(cur, a, m)[0]
        v = choose_split_partner(cur, a, lengths, u)
        cur = split_off(cur, u, v, m)
        lengths[m - 1] -= 1
        pair = (u, v)
    return SplitChain(tuple(steps))


# -- decomposition bounds -----------------------------------------------------


def _inner_pairs(g: Multigraph, a: frozenset[int]) -> list[tuple[int, int]]:
    return [e for e in g.pairs if e[0] in a and e[1] in a]


@dataclass(frozen=True)
class Bound:
    lhs: object
    rhs: object
    holds: bool
    split: tuple | None = None


def decomposition_lp_packing(g: Multigraph) -> tuple[Fraction, tuple]:
    """Max over ``e~`` of packing in the ``A``-part plus spanning packing of the complement, as one LP."""
    a, m = helper_set(g)
    inner = _inner_pairs(g, a)
    trees = enumerate_steiner_trees(g, a)
    s1 = [t for t in trees if m not in t.vertices]
    s2 = [t for t in trees if m in t.vertices]
    ne, nt = len(inner), len(trees)
    cols = s1 + s2
    p = LinearProgram([0] * ne + [1] * nt, sense="max")
    for k, e in enumerate(inner):
        row = [0] * ne + [1 if e in t.edges else 0 for t in s1] + [0] * len(s2)
        row[k] = -1
        p.add(row, "<=", 0)
        row = [0] * ne + [0] * len(s1) + [1 if e in t.edges else 0 for t in s2]
        row[k] = 1
        p.add(row, "<=", g.e(*e))
        p.add([1 if q == k else 0 for q in range(ne)] + [0] * nt, "<=", g.e(*e))
    for e in g.pairs:
        if m in e:
            p.add([0] * ne + [0] * len(s1) + [1 if e in t.edges else 0 for t in s2], "<=", g.e(*e))
    res = solve_lp(p)
    assert res.status == OPTIMAL and len(cols) == nt
    return res.value, tuple(zip(inner, res.x[:ne]))


def decomposition_lp_omn(g: Multigraph) -> tuple[Fraction, tuple]:
    """Min over ``e~`` of omniscience in the ``A``-part plus the complement, as one LP."""
    a, m = helper_set(g)
    inner = _inner_pairs(g, a)
    ne = len(inner)
    na, nm = m - 1, m
    p = LinearProgram([0] * ne + [1] * na + [1] * nm)
    for k, e in enumerate(inner):
        p.add([1 if q == k else 0 for q in range(ne)] + [0] * (na + nm), "<=", g.e(*e))
    for B in enumerate_constraint_sets(na, a):
        row = [-1 if (e[0] in B and e[1] in B) else 0 for e in inner]
        row += [1 if i in B else 0 for i in range(1, na + 1)] + [0] * nm
        p.add(row, ">=", 0)
    full = frozenset(g.vertices)
    for B in enumerate_constraint_sets(g.m, full):
        row = [1 if (e[0] in B and e[1] in B) else 0 for e in inner]
        row += [0] * na + [1 if i in B else 0 for i in g.vertices]
        p.add(row, ">=", internal_edges(g, B))
    res = solve_lp(p)
    assert res.status == OPTIMAL
    return res.value, tuple(zip(inner, res.x[:ne]))


def _parts(g: Multigraph, a: frozenset[int], inner, tilde) -> tuple[Multigraph, Multigraph]:
    mult = g.as_dict()
    part = {}
    for e, t in zip(inner, tilde):
        part[e] = t
        mult[e] = mult[e] - t
    return induced(g.with_multiplicities(part), a), g.with_multiplicities(mult)


def integer_boxes(g: Multigraph, cap: int = DEFAULT_BOX_CAP):
    """Every integer ``e~`` with ``0 <= e~_ij <= e_ij`` on pairs inside ``A``."""
    a, _ = helper_set(g)
    inner = _inner_pairs(g, a)
    size = math.prod(g.e(*e) + 1 for e in inner)
    if size > cap:
        raise CapExceeded(f"integer decomposition box has {size} points (cap {cap})")
    return inner, itertools.product(*[range(g.e(*e) + 1) for e in inner])


def decomposition_int_packing(g: Multigraph, cap: int = DEFAULT_BOX_CAP) -> tuple[int, tuple]:
    """Max over integer ``e~`` of spanning-tree packings of both parts (partition formula)."""
    a, _ = helper_set(g)
    inner, box = integer_boxes(g, cap)
    best, arg = None, None
    for tilde in box:
        part, rest = _parts(g, a, inner, tilde)
        val = nash_williams(part) + nash_williams(rest)
        if best is None or val > best:
            best, arg = val, tilde
    return best, tuple(zip(inner, arg))


def decomposition_int_omn(g: Multigraph) -> tuple[int, tuple]:
    """Min over integer ``e~`` of the two integer omniscience programs, as one integer program."""
    a, m = helper_set(g)
    inner = _inner_pairs(g, a)
    ne, na, nm = len(inner), m - 1, m
    p = LinearProgram([0] * ne + [1] * na + [1] * nm)
    for B in enumerate_constraint_sets(na, a):
        row = [-1 if (e[0] in B and e[1] in B) else 0 for e in inner]
        row += [1 if i in B else 0 for i in range(1, na + 1)] + [0] * nm
        p.add(row, ">=", 0)
    full = frozenset(g.vertices)
    for B in enumerate_constraint_sets(g.m, full):
        row = [1 if (e[0] in B and e[1] in B) else 0 for e in inner]
        row += [0] * na + [1 if i in B else 0 for i in g.vertices]
        p.add(row, ">=", internal_edges(g, B))
    bounds = [(0, g.e(*e)) for e in inner]
    bounds += [(0, degree(g, i)) for i in range(1, na + 1)] + [(0, degree(g, i)) for i in g.vertices]
    res = solve_ilp(p, bounds=bounds)
    assert res.status == OPTIMAL
    return int(res.value), tuple(zip(inner, (int(v) for v in res.x[:ne])))


@dataclass(frozen=True)
class Prop6Table:
    fractional_packing: Bound
    fractional_omn: Bound
    integer_packing: Bound
    integer_omn: Bound

    def rows(self) -> list[tuple[str, Bound]]:
        return [
            ("fractional_packing", self.fractional_packing),
            ("fractional_omn", self.fractional_omn),
            ("integer_packing", self.integer_packing),
            ("integer_omn", self.integer_omn),
        ]

    @property
    def holds(self) -> bool:
        return all(b.holds for _, b in self.rows())


def prop6_bounds(g: Multigraph, cap: int = DEFAULT_BOX_CAP) -> Prop6Table:
    """Compare packing and omniscience values with their decomposition counterparts."""
    a, _ = helper_set(g)
    muf, _ = mu_f(g, a)
    om = omn(g, a).value
    mu_int, _ = mu(g, a)
    io = int_omn(g, a).value
    r1, s1 = decomposition_lp_packing(g)
    r2, s2 = decomposition_lp_omn(g)
    r3, s3 = decomposition_int_packing(g, cap)
    r4, s4 = decomposition_int_omn(g)
    return Prop6Table(
        Bound(muf, r1, muf >= r1, s1),
        Bound(om, r2, om <= r2, s2),
        Bound(mu_int, r3, mu_int >= r3, s3),
        Bound(io, r4, io <= r4, s4),
    )


@dataclass(frozen=True)
class Thm7Verdict:
    fractional_equality: bool
    integer_equality: bool
    fractional_direct: bool
    integer_direct: bool
    mu_f: Fraction
    capacity: Fraction
    mu: int
    int_gap: int

    @property
    def consistent(self) -> bool:
        return (self.fractional_equality == self.fractional_direct
                and self.integer_equality == self.integer_direct)


def thm7_check(g: Multigraph, table: Prop6Table | None = None, cap: int = DEFAULT_BOX_CAP) -> Thm7Verdict:
    """Decomposition equalities next to the direct packing comparisons they characterize."""
    a, _ = helper_set(g)
    table = table or prop6_bounds(g, cap)
    frac = table.fractional_omn.lhs == table.fractional_omn.rhs
    integ = table.integer_omn.lhs == table.integer_omn.rhs
    cap_value = g.size - table.fractional_omn.lhs
    gap = g.size - table.integer_omn.lhs
    return Thm7Verdict(
        frac, integ,
        table.fractional_packing.lhs == cap_value,
        table.integer_packing.lhs == gap,
        table.fractional_packing.lhs, cap_value,
        table.integer_packing.lhs, gap,
    )
