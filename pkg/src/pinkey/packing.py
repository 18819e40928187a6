"""Steiner tree enumeration and exact integer / fractional packings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import kernels
from .exact import CapExceeded, LinearProgram, OPTIMAL, solve_lp
from .graph import GraphError, Multigraph, blow_up, components, cut_size, degree, subsets_by_size

DEFAULT_TREE_CAP = 10**6
COLGEN_BATCH = 8


@dataclass(frozen=True)
class SteinerTree:
    """Edge set of a tree in the support graph, one entry per vertex pair."""

    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    def __len__(self) -> int:
        return len(self.edges)

    def leaves(self) -> list[int]:
        deg: dict[int, int] = {}
        for i, j in self.edges:
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
        return sorted(v for v, d in deg.items() if d == 1)

    def is_tree(self) -> bool:
        verts = self.vertices
        if len(set(self.edges)) != len(self.edges) or len(self.edges) != len(verts) - 1:
            return False
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    def covers(self, A: Iterable[int]) -> bool:
        return frozenset(A) <= self.vertices

    def check(self, g: Multigraph, A: Iterable[int]) -> None:
        if not self.is_tree():
            raise GraphError(f"{self.edges} is not a tree")
        if not self.covers(A):
            raise GraphError(f"{self.edges} does not cover {sorted(A)}")
        for i, j in self.edges:
            if g.e(i, j) < 1:
                raise GraphError(f"tree edge ({i}, {j}) is not in the graph")


@dataclass(frozen=True)
class IntegerPacking:
    trees: tuple[tuple[SteinerTree, int], ...]

    @property
    def size(self) -> int:
        return sum(c for _, c in self.trees)

    def usage(self) -> dict[tuple[int, int], int]:
        use: dict[tuple[int, int], int] = {}
        for t, c in self.trees:
            for e in t.edges:
                use[e] = use.get(e, 0) + c
        return use

    def instances(self) -> list[SteinerTree]:
        return [t for t, c in self.trees for _ in range(c)]

    def check(self, g: Multigraph, A: Iterable[int]) -> None:
        for t, c in self.trees:
            if c < 0:
                raise GraphError("negative usage count")
            t.check(g, A)
        for e, u in self.usage().items():
            if u > g.e(*e):
                raise GraphError(f"pair {e} used {u} times but has multiplicity {g.e(*e)}")


@dataclass(frozen=True)
class FractionalPacking:
    weights: tuple[tuple[SteinerTree, Fraction], ...]

    @property
    def value(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    def usage(self) -> dict[tuple[int, int], Fraction]:
        use: dict[tuple[int, int], Fraction] = {}
        for t, w in self.weights:
            for e in t.edges:
                use[e] = use.get(e, Fraction(0)) + w
        return use

    def check(self, g: Multigraph, A: Iterable[int]) -> None:
        for t, w in self.weights:
            if w < 0:
                raise GraphError("negative tree weight")
            t.check(g, A)
        for e, u in self.usage().items():
            if u > g.e(*e):
                raise GraphError(f"pair {e} carries weight {u} > {g.e(*e)}")


def _spanning_trees(verts: list[int], pairs: list[tuple[int, int]]):
    """Spanning trees of a simple graph by include/exclude over sorted pairs."""
    need = len(verts) - 1
    label = {v: v for v in verts}
    chosen: list[tuple[int, int]] = []

    def rec(idx: int):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if len(pairs) - idx < need - len(chosen):
            return
        i, j = pairs[idx]
        li, lj = label[i], label[j]
        if li != lj:
            moved = [v for v in verts if label[v] == lj]
            for v in moved:
                label[v] = li
            chosen.append((i, j))
            yield from rec(idx + 1)
            chosen.pop()
            for v in moved:
                label[v] = lj
        yield from rec(idx + 1)

    if need == 0:
        yield ()
        return
    yield from rec(0)


def enumerate_steiner_trees(g: Multigraph, A: Iterable[int], minimal: bool = False,
                            cap: int = DEFAULT_TREE_CAP) -> list[SteinerTree]:
    """All distinct trees of the support graph whose vertex set contains ``A``.

    Ordered by vertex set (size, then lexicographic), then edge set.  With
    ``minimal`` only trees whose leaves all lie in ``A`` are kept.
    """
    a = frozenset(A)
    if len(a) < 2:
        raise GraphError("the secrecy-seeking set needs at least 2 terminals")
    support = g.pairs
    others = [v for v in g.vertices if v not in a]
    out: list[SteinerTree] = []
    for extra in subsets_by_size(others):
        S = a | extra
        verts = sorted(S)
        pairs = [(i, j) for i, j in support if i in S and j in S]
        if len(pairs) < len(verts) - 1:
            continue
        for edges in _spanning_trees(verts, pairs):
            t = SteinerTree(edges)
            if minimal and not set(t.leaves()) <= a:
                continue
            out.append(t)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} Steiner trees")
    return out


def _a_connected(g: Multigraph, a: frozenset[int]) -> bool:
    return any(a <= comp for comp in components(g))


def _packing_lp(g: Multigraph, trees: list[SteinerTree]) -> LinearProgram:
    pairs = g.pairs
    p = LinearProgram([1] * len(trees), sense="max")
    for e in pairs:
        p.add([1 if e in t.edges else 0 for t in trees], "<=", g.e(*e))
    return p


def mu_f(g: Multigraph, A: Iterable[int], method: str = "colgen",
         cap: int = DEFAULT_TREE_CAP, trees: list[SteinerTree] | None = None):
    """Maximal fractional Steiner tree packing; ``(value, FractionalPacking)``.

    ``method="colgen"`` prices minimal trees against the dual of a
    restricted program until none has positive reduced cost;
    ``method="full"`` solves the program over every tree at once.
    """
    a = frozenset(A)
    if trees is None:
        trees = enumerate_steiner_trees(g, a, minimal=(method == "colgen"), cap=cap)
    if not trees or not _a_connected(g, a):
        return Fraction(0), FractionalPacking(())
    if method == "full":
        res = solve_lp(_packing_lp(g, trees))
        assert res.status == OPTIMAL
        w = tuple((t, v) for t, v in zip(trees, res.x) if v)
        return res.value, FractionalPacking(w)
    if method != "colgen":
        raise ValueError(f"unknown method {method!r}")

    pairs = g.pairs
    pidx = {e: k for k, e in enumerate(pairs)}
    tree_rows = [[pidx[e] for e in t.edges] for t in trees]
    active: list[int] = []
    used = [0] * len(pairs)
    for l, rows in enumerate(tree_rows):
        if all(used[p] < g.e(*pairs[p]) for p in rows):
            active.append(l)
            for p in rows:
                used[p] += 1
    if not active:
        active = [0]
    while True:
        res = solve_lp(_packing_lp(g, [trees[l] for l in active]))
        assert res.status == OPTIMAL
        y = res.duals
        inset = set(active)
        priced = []
        for l, rows in enumerate(tree_rows):
            if l in inset:
                continue
            rc = 1 - sum((y[p] for p in rows), Fraction(0))
            if rc > 0:
                priced.append((-rc, l))
        if not priced:
            break
        priced.sort()
        active.extend(l for _, l in priced[:COLGEN_BATCH])
    w = tuple((trees[l], v) for l, v in zip(active, res.x) if v)
    return res.value, FractionalPacking(w)


def _separating_cuts(g: Multigraph, a: frozenset[int], max_cuts: int = 256) -> list[frozenset[int]]:
    anchor = min(a)
    rest = [v for v in g.vertices if v != anchor]
    if (1 << len(rest)) <= max_cuts:
        sides = [frozenset({anchor}) | s for s in subsets_by_size(rest)]
    else:
        sides = [frozenset({v}) for v in sorted(a)] + [frozenset(g.vertices) - {v} for v in sorted(a)]
    return [s for s in sides if not a <= s and s & a]


def mu(g: Multigraph, A: Iterable[int], n: int = 1, cap: int = DEFAULT_TREE_CAP,
       node_limit: int = 0, kernel=None) -> tuple[int, IntegerPacking]:
    """Maximum number of edge-disjoint Steiner trees for ``A`` in ``G^(n)``.

    Exact: the search starts at the floor of the fractional optimum and
    proves each smaller target infeasible before descending.
    """
    a = frozenset(A)
    if len(a) < 2:
        raise GraphError("the secrecy-seeking set needs at least 2 terminals")
    if not _a_connected(g, a):
        return 0, IntegerPacking(())
    gn = blow_up(g, n) if n != 1 else g
    trees = enumerate_steiner_trees(g, a, minimal=True, cap=cap)
    order = sorted(range(len(trees)), key=lambda l: (len(trees[l]), l))
    trees = [trees[l] for l in order]
    pairs = gn.pairs
    pidx = {e: k for k, e in enumerate(pairs)}
    tree_pairs = [[pidx[e] for e in t.edges] for t in trees]
    cuts = _separating_cuts(gn, a)
    cut_pairs = [[pidx[e] for e in pairs if (e[0] in s) != (e[1] in s)] for s in cuts]
    cut_sets = [set(cp) for cp in cut_pairs]
    tree_cut = [[sum(1 for p in tp if p in cs) for cs in cut_sets] for tp in tree_pairs]
    capv = [gn.e(*e) for e in pairs]

    frac, _ = mu_f(g, a, trees=None)
    upper = math.floor(frac * n)
    if cuts:
        upper = min(upper, min(cut_size(gn, s) for s in cuts))
    search = (kernel or kernels).pack_search
    for target in range(upper, 0, -1):
        found = search(capv, tree_pairs, tree_cut, cut_pairs, target, node_limit)
        if found is not None:
            counts: dict[int, int] = {}
            for l in found:
                counts[l] = counts.get(l, 0) + 1
            packing = IntegerPacking(tuple((trees[l], c) for l, c in sorted(counts.items())))
            packing.check(gn, a)
            return target, packing
    return 0, IntegerPacking(())


def eulerian_lower_bound(g: Multigraph, A: Iterable[int]) -> int:
    """Half the minimum ``A``-separating cut, valid when every degree is even."""
    a = frozenset(A)
    odd = [v for v in g.vertices if degree(g, v) % 2]
    if odd:
        raise GraphError(f"graph is not Eulerian: odd degree at {odd}")
    if len(a) < 2:
        raise GraphError("the secrecy-seeking set needs at least 2 terminals")
    best = None
    for side in subsets_by_size(g.vertices):
        if side & a and not a <= side:
            c = cut_size(g, side)
            best = c if best is None else min(best, c)
    return best // 2


def packing_rate(g: Multigraph, A: Iterable[int], n_max: int, cap: int = DEFAULT_TREE_CAP,
                 node_limit: int = 0) -> tuple[list[tuple[int, int, Fraction]], Fraction]:
    """``[(n, mu(A, G^(n)), mu/n)]`` for ``n = 1..n_max`` and the fractional value."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rows = []
    for n in range(1, n_max + 1):
        val, _ = mu(g, A, n=n, cap=cap, node_limit=node_limit)
        rows.append((n, val, Fraction(val, n)))
    frac, _ = mu_f(g, A, cap=cap)
    return rows, frac
