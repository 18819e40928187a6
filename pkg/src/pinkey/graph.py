"""Multigraphs for the pairwise-independent-network model.

Vertices are the terminals ``1..m``.  The multiplicity ``e[i, j]`` of an
unordered pair is the number of secret bits that pair shares per
observation, so reciprocity holds by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Malformed graph input or a violated graph precondition."""


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Multigraph:
    """Undirected loop-free multigraph on vertices ``1..m``.

    Only pairs with positive multiplicity are stored in ``edges``.
    """

    m: int
    edges: tuple[tuple[tuple[int, int], int], ...] = ()
    _mult: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.m < 2:
            raise GraphError(f"need at least 2 terminals, got m={self.m}")
        mult = {}
        for (i, j), k in self.edges:
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.m and 1 <= j <= self.m):
                raise GraphError(f"vertex out of range in pair ({i}, {j}) for m={self.m}")
            if k < 0:
                raise GraphError(f"negative multiplicity {k} on pair ({i}, {j})")
            if k:
                p = _pair(i, j)
                mult[p] = mult.get(p, 0) + k
        canon = tuple(sorted(mult.items()))
        object.__setattr__(self, "edges", canon)
        object.__setattr__(self, "_mult", dict(canon))

    @classmethod
    def from_dict(cls, m: int, mult: dict) -> "Multigraph":
        return cls(m, tuple(mult.items()))

    def e(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self._mult.get(_pair(i, j), 0)

    @property
    def vertices(self) -> range:
        return range(1, self.m + 1)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Support pairs (positive multiplicity) in lexicographic order."""
        return [p for p, _ in self.edges]

    @property
    def size(self) -> int:
        """Total edge count |E| with multiplicity."""
        return sum(k for _, k in self.edges)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.vertices if j != i and self.e(i, j) > 0]

    def is_connected(self) -> bool:
        return len(components(self)) == 1

    def with_multiplicities(self, mult: dict) -> "Multigraph":
        return Multigraph.from_dict(self.m, mult)

    def as_dict(self) -> dict:
        return dict(self._mult)


def validate(raw: Iterable[tuple[int, int, int]], m: int | None = None) -> tuple[Multigraph, bool]:
    """Build a canonical multigraph from ``(i, j, multiplicity)`` entries.

    Repeated pairs accumulate.  Returns the graph and whether its support
    is connected; disconnected graphs are accepted.
    """
    entries = [tuple(int(v) for v in item) for item in raw]
    for item in entries:
        if len(item) != 3:
            raise GraphError(f"expected (i, j, multiplicity), got {item!r}")
    if m is None:
        m = max((max(i, j) for i, j, _ in entries), default=0)
    g = Multigraph(m, tuple(((i, j), k) for i, j, k in entries))
    return g, g.is_connected()


def components(g: Multigraph) -> list[frozenset[int]]:
    parent = list(range(g.m + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j), _ in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, set[int]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(s) for _, s in sorted(groups.items())]


def blow_up(g: Multigraph, n: int) -> Multigraph:
    """Multiply every multiplicity by ``n``."""
    if n < 1:
        raise GraphError(f"blow-up factor must be positive, got {n}")
    return Multigraph(g.m, tuple((p, n * k) for p, k in g.edges))


def degree(g: Multigraph, i: int) -> int:
    if not 1 <= i <= g.m:
        raise GraphError(f"vertex {i} out of range for m={g.m}")
    return sum(k for (a, b), k in g.edges if i in (a, b))


def internal_edges(g: Multigraph, subset: Iterable[int]) -> int:
    """Edges (with multiplicity) with both endpoints in ``subset``."""
    s = set(subset)
    return sum(k for (i, j), k in g.edges if i in s and j in s)


def crossing_count(g: Multigraph, partition: Iterable[Iterable[int]]) -> int:
    """Edges (with multiplicity) joining two different atoms."""
    atom_of = {}
    for idx, atom in enumerate(partition):
        for v in atom:
            atom_of[v] = idx
    return sum(k for (i, j), k in g.edges if atom_of[i] != atom_of[j])


def cut_size(g: Multigraph, side: Iterable[int]) -> int:
    s = set(side)
    return sum(k for (i, j), k in g.edges if (i in s) != (j in s))


def subsets_by_size(items: Iterable[int]) -> Iterator[frozenset[int]]:
    """All subsets, ordered by size then lexicographically."""
    pool = sorted(items)
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            yield frozenset(combo)


def enumerate_constraint_sets(m: int, A: Iterable[int]) -> Iterator[frozenset[int]]:
    """Nonempty proper subsets of ``1..m`` that do not contain all of ``A``."""
    a = frozenset(A)
    if len(a) < 2:
        raise GraphError("the secrecy-seeking set needs at least 2 terminals")
    full = range(1, m + 1)
    for b in subsets_by_size(full):
        if 0 < len(b) < m and not a <= b:
            yield b


def set_partitions(items: Iterable[int]) -> Iterator[list[frozenset[int]]]:
    """All set partitions of ``items`` (restricted-growth order)."""
    pool = sorted(items)
    if not pool:
        yield []
        return

    def grow(k: int, blocks: list[list[int]]):
        if k == len(pool):
            yield [frozenset(b) for b in blocks]
            return
        x = pool[k]
        for b in blocks:
            b.append(x)
            yield from grow(k + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from grow(k + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def split_off(g: Multigraph, u: int, v: int, h: int) -> Multigraph:
    """Replace one ``u-h`` edge and one ``v-h`` edge by a ``u-v`` edge."""
    if u == v or h in (u, v):
        raise GraphError(f"split-off needs distinct u, v and helper, got ({u}, {v}, {h})")
    if g.e(u, h) < 1 or g.e(v, h) < 1:
        raise GraphError(
            f"insufficient multiplicity to split off ({u},{h}) and ({v},{h}): "
            f"e={g.e(u, h)}, {g.e(v, h)}"
        )
    mult = g.as_dict()
    mult[_pair(u, h)] -= 1
    mult[_pair(v, h)] -= 1
    mult[_pair(u, v)] = mult.get(_pair(u, v), 0) + 1
    return g.with_multiplicities(mult)


def induced(g: Multigraph, keep: Iterable[int]) -> Multigraph:
    """Sub-multigraph on vertices ``1..k`` given ``keep == {1..k}``.

    Only the prefix case is supported; it is what the single-helper
    analysis needs (users are ``1..m-1``).
    """
    k = sorted(keep)
    if k != list(range(1, len(k) + 1)):
        raise GraphError("induced() expects a vertex prefix 1..k")
    return Multigraph(len(k), tuple((p, c) for p, c in g.edges if p[1] <= len(k)))


# -- graph text format -------------------------------------------------------


def parse_graph_text(text: str, source: str = "<graph>") -> tuple[Multigraph, frozenset[int]]:
    """Parse ``m <count> A <members>`` followed by ``i j e_ij`` lines."""
    header = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if len(tok) < 2 or tok[0] != "m":
                raise GraphError(f"{source}:{lineno}: header must start with 'm <count>'")
            try:
                m = int(tok[1])
            except ValueError:
                raise GraphError(f"{source}:{lineno}: bad terminal count {tok[1]!r}") from None
            members = []
            if len(tok) > 2:
                if tok[2] != "A":
                    raise GraphError(f"{source}:{lineno}: expected 'A' after the count")
                try:
                    members = [int(t) for t in tok[3:]]
                except ValueError:
                    raise GraphError(f"{source}:{lineno}: bad member in A") from None
            for a in members:
                if not 1 <= a <= m:
                    raise GraphError(f"{source}:{lineno}: member {a} out of range 1..{m}")
            header = (m, frozenset(members) if members else frozenset(range(1, m + 1)))
            continue
        if len(tok) != 3:
            raise GraphError(f"{source}:{lineno}: expected 'i j e_ij'")
        try:
            i, j, k = (int(t) for t in tok)
        except ValueError:
            raise GraphError(f"{source}:{lineno}: non-integer field") from None
        if i == j:
            raise GraphError(f"{source}:{lineno}: self-loop at vertex {i}")
        if not (1 <= i <= header[0] and 1 <= j <= header[0]):
            raise GraphError(f"{source}:{lineno}: vertex out of range 1..{header[0]}")
        if k < 0:
            raise GraphError(f"{source}:{lineno}: negative multiplicity")
        entries.append((i, j, k))
    if header is None:
        raise GraphError(f"{source}: missing header line")
    m, A = header
    g = Multigraph(m, tuple(((i, j), k) for i, j, k in entries))
    return g, A


def format_graph_text(g: Multigraph, A: Iterable[int]) -> str:
    lines = [f"m {g.m} A " + " ".join(str(a) for a in sorted(A))]
    lines += [f"{i} {j} {k}" for (i, j), k in g.edges]
    return "\n".join(lines) + "\n"


# -- named instances ---------------------------------------------------------

FIGURE1_LABELS = {1: "t", 2: "h1", 3: "h2", 4: "h3", 5: "b1", 6: "b2", 7: "b3"}


def figure1() -> tuple[Multigraph, frozenset[int]]:
    """Seven-terminal example: user t on top, helpers h1..h3, users b1..b3.

    Labels: t=1, h1=2, h2=3, h3=4, b1=5, b2=6, b3=7.
    """
    edges = [(1, 2), (1, 3), (1, 4), (5, 2), (5, 3), (6, 2), (6, 4), (7, 3), (7, 4)]
    g = Multigraph(7, tuple((e, 1) for e in edges))
    return g, frozenset({1, 5, 6, 7})


def triangle(k: int = 1) -> Multigraph:
    return Multigraph(3, (((1, 2), k), ((1, 3), k), ((2, 3), k)))


def path3() -> Multigraph:
    return Multigraph(3, (((1, 2), 1), ((2, 3), 1)))


def complete(m: int, k: int = 1) -> Multigraph:
    return Multigraph(m, tuple(((i, j), k) for i, j in itertools.combinations(range(1, m + 1), 2)))
