"""Omniscience rates, secret-key capacity and partition bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import CapExceeded, LinearProgram, OPTIMAL, solve_ilp, solve_lp
from .graph import (
    GraphError,
    Multigraph,
    blow_up,
    crossing_count,
    degree,
    enumerate_constraint_sets,
    internal_edges,
    set_partitions,
)

DEFAULT_MAX_TERMINALS = 12


@dataclass(frozen=True)
class OmniscienceSolution:
    value: Fraction
    rates: tuple[Fraction, ...]
    graph: Multigraph
    A: frozenset[int]


@dataclass(frozen=True)
class IntOmniscienceSolution:
    value: int
    lengths: tuple[int, ...]
    n: int
    graph: Multigraph
    A: frozenset[int]


def _check_A(g: Multigraph, A: Iterable[int], max_terminals: int) -> frozenset[int]:
    a = frozenset(A)
    if len(a) < 2:
        raise GraphError("the secrecy-seeking set needs at least 2 terminals")
    if not all(1 <= v <= g.m for v in a):
        raise GraphError(f"set {sorted(a)} is not inside 1..{g.m}")
    if g.m > max_terminals:
        raise CapExceeded(f"m={g.m} exceeds the terminal cap {max_terminals}")
    return a


def omniscience_program(g: Multigraph, A: Iterable[int], prune: bool = False) -> LinearProgram:
    """Rate region: ``sum_{i in B} R_i >= e_G(B)`` for every constraint set ``B``.

    With ``prune`` the vacuous rows (``e_G(B) = 0``) are dropped.
    """
    p = LinearProgram([1] * g.m)
    for B in enumerate_constraint_sets(g.m, A):
        rhs = internal_edges(g, B)
        if prune and rhs == 0:
            continue
        p.add([1 if i in B else 0 for i in g.vertices], ">=", rhs)
    return p


def omn(g: Multigraph, A: Iterable[int], prune: bool = False,
        max_terminals: int = DEFAULT_MAX_TERMINALS) -> OmniscienceSolution:
    """Minimum total rate of linear communication for perfect omniscience of ``A``."""
    a = _check_A(g, A, max_terminals)
    res = solve_lp(omniscience_program(g, a, prune))
    assert res.status == OPTIMAL, res.status
    return OmniscienceSolution(res.value, tuple(res.x), g, a)


def int_omn(g: Multigraph, A: Iterable[int], n: int = 1, prune: bool = False,
            max_terminals: int = DEFAULT_MAX_TERMINALS) -> IntOmniscienceSolution:
    """Integer program lower-bounding the length of any omniscience scheme on ``G^(n)``."""
    a = _check_A(g, A, max_terminals)
    gn = blow_up(g, n)
    p = omniscience_program(gn, a, prune)
    bounds = [(0, degree(gn, i)) for i in g.vertices]
    res = solve_ilp(p, bounds=bounds)
    assert res.status == OPTIMAL, res.status
    return IntOmniscienceSolution(int(res.value), tuple(int(v) for v in res.x), n, g, a)


def capacity(g: Multigraph, A: Iterable[int], **kw) -> Fraction:
    """Perfect secret-key capacity ``|E| - OMN_G(A)`` in bits per observation."""
    return g.size - omn(g, A, **kw).value


def _partition_ratio_min(g: Multigraph, keep) -> tuple[Fraction | None, list | None]:
    best, arg = None, None
    for part in set_partitions(g.vertices):
        if len(part) < 2 or not keep(part):
            continue
        r = Fraction(crossing_count(g, part), len(part) - 1)
        if best is None or r < best:
            best, arg = r, part
    return best, arg


def partition_bound(g: Multigraph, A: Iterable[int],
                    max_terminals: int = DEFAULT_MAX_TERMINALS) -> Fraction:
    """Upper bound on capacity: min crossing/(|P|-1) over partitions whose atoms all meet ``A``."""
    a = _check_A(g, A, max_terminals)
    best, _ = _partition_ratio_min(g, lambda part: all(atom & a for atom in part))
    return best


def nash_williams(g: Multigraph, max_terminals: int = DEFAULT_MAX_TERMINALS) -> int:
    """Maximum number of edge-disjoint spanning trees, via the partition formula."""
    if g.m > max_terminals:
        raise CapExceeded(f"m={g.m} exceeds the terminal cap {max_terminals}")
    best, _ = _partition_ratio_min(g, lambda part: True)
    return math.floor(best)


def nash_williams_ratio(g: Multigraph) -> Fraction:
    best, _ = _partition_ratio_min(g, lambda part: True)
    return best
