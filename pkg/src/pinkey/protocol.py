"""Linear secret-key protocols and their exhaustive verification.

The global source vector has one coordinate per shared bit: pairs in
lexicographic order, each contributing ``n * e_ij`` consecutive bits.
Terminal ``i`` observes the coordinates of its incident pairs, in the
same order; its matrix ``L_i`` acts on those local columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import gf2, kernels
from .exact import CapExceeded
from .graph import GraphError, Multigraph, blow_up
from .packing import SteinerTree, mu

DEFAULT_BRUTE_FORCE_BITS = 24
DEFAULT_EPSILON = Fraction(1, 10)
DEFAULT_SEED = 20100101


class DecodingError(RuntimeError):
    """A terminal cannot pin down the key from its bits and the transcript."""


@dataclass(frozen=True)
class SourceLayout:
    g: Multigraph
    n: int

    @property
    def coords(self) -> list[tuple[tuple[int, int], int]]:
        return [(e, t) for e, k in self.g.edges for t in range(self.n * k)]

    @property
    def nbits(self) -> int:
        return self.n * self.g.size

    def offset(self, pair: tuple[int, int]) -> int:
        off = 0
        for e, k in self.g.edges:
            if e == pair:
                return off
            off += self.n * k
        raise GraphError(f"pair {pair} has no shared bits")

    def coord(self, pair: tuple[int, int], t: int) -> int:
        if not 0 <= t < self.n * self.g.e(*pair):
            raise GraphError(f"bit index {t} out of range for pair {pair}")
        return self.offset(pair) + t

    def local(self, i: int) -> list[int]:
        """Global coordinates observed by terminal ``i``, in local column order."""
        return [c for c, (e, _) in enumerate(self.coords) if i in e]

    def mask(self, i: int) -> int:
        out = 0
        for c in self.local(i):
            out |= 1 << c
        return out

    def lift(self, i: int, local_row: int) -> int:
        out = 0
        for k, c in enumerate(self.local(i)):
            if (local_row >> k) & 1:
                out |= 1 << c
        return out

    def lower(self, i: int, global_row: int) -> int:
        loc = self.local(i)
        if global_row & ~self.mask(i):
            raise GraphError(f"row touches bits terminal {i} does not observe")
        return sum(1 << k for k, c in enumerate(loc) if (global_row >> c) & 1)


@dataclass(frozen=True)
class SourceRealization:
    """One outcome of every shared bit, packed as an int over global coordinates."""

    layout: SourceLayout
    bits: int

    @classmethod
    def from_pairs(cls, layout: SourceLayout, values: dict) -> "SourceRealization":
        """``values[(i, j)]`` is a sequence of ``n * e_ij`` bits (index 0 first)."""
        x = 0
        for pair, seq in values.items():
            pair = tuple(sorted(pair))
            seq = list(seq)
            if len(seq) != layout.n * layout.g.e(*pair):
                raise GraphError(f"pair {pair} needs {layout.n * layout.g.e(*pair)} bits")
            for t, b in enumerate(seq):
                if b:
                    x |= 1 << layout.coord(pair, t)
        return cls(layout, x)

    def value(self, pair: tuple[int, int], t: int) -> int:
        return (self.bits >> self.layout.coord(tuple(sorted(pair)), t)) & 1

    def observation(self, i: int) -> int:
        return self.layout.lower(i, self.bits & self.layout.mask(i))


@dataclass(frozen=True)
class LinearScheme:
    """Per-terminal binary matrices; ``matrices[i-1]`` holds terminal ``i``'s rows."""

    g: Multigraph
    n: int
    matrices: tuple[tuple[int, ...], ...]
    layout: SourceLayout = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.matrices) != self.g.m:
            raise GraphError(f"need {self.g.m} matrices, got {len(self.matrices)}")
        object.__setattr__(self, "layout", SourceLayout(self.g, self.n))
        for i, rows in enumerate(self.matrices, start=1):
            width = len(self.layout.local(i))
            for r in rows:
                if r < 0 or r >> width:
                    raise GraphError(f"row of terminal {i} wider than its {width} observed bits")

    @classmethod
    def from_global(cls, g: Multigraph, n: int, rows: Iterable[tuple[int, int]]) -> "LinearScheme":
        layout = SourceLayout(g, n)
        per: list[list[int]] = [[] for _ in g.vertices]
        for i, row in rows:
            per[i - 1].append(layout.lower(i, row))
        return cls(g, n, tuple(tuple(r) for r in per))

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.matrices)

    @property
    def length(self) -> int:
        return sum(self.lengths)

    def width(self, i: int) -> int:
        return len(self.layout.local(i))

    def global_rows(self) -> list[int]:
        """Stacked communication map in terminal order."""
        return [self.layout.lift(i, r) for i, rows in enumerate(self.matrices, start=1) for r in rows]


@dataclass(frozen=True)
class KeyMap:
    rows: tuple[int, ...]
    nbits: int

    @property
    def length(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Transcript:
    parts: tuple[tuple[int, ...], ...]

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(b for part in self.parts for b in part)


@dataclass(frozen=True)
class LCOCheck:
    ok: bool
    terminal: int | None = None
    witness: int | None = None


@dataclass
class SecrecyReport:
    recoverable: dict[int, bool]
    uniform_conditional: bool
    security_index_zero: bool
    key_length: int
    transcript_values: int
    witness: dict | None = None
    security_index: float | None = None

    @property
    def ok(self) -> bool:
        return all(self.recoverable.values()) and self.security_index_zero


# -- tree communication -------------------------------------------------------


def tree_lc(tree: SteinerTree) -> list[tuple[int, int, int]]:
    """Parity checks ``(sender, a, b)`` meaning edge bit ``a`` xor edge bit ``b``.

    Edge indices refer to ``tree.edges``.  Peels leaves one at a time; each
    leaf edge is paired with another edge at its inner endpoint, which is
    the terminal that sends the parity.
    """
    if len(tree) == 0 or not tree.is_tree():
        raise GraphError(f"malformed tree {tree.edges}")
    live = set(range(len(tree)))
    checks = []
    while len(live) > 1:
        deg: dict[int, list[int]] = {}
        for k in live:
            for v in tree.edges[k]:
                deg.setdefault(v, []).append(k)
        leaf = min(v for v, ks in deg.items() if len(ks) == 1)
        leaf_edge = deg[leaf][0]
        i, j = tree.edges[leaf_edge]
        inner = j if i == leaf else i
        other = min(k for k in deg[inner] if k != leaf_edge)
        checks.append((inner, min(other, leaf_edge), max(other, leaf_edge)))
        live.remove(leaf_edge)
    checks.reverse()
    return checks


def tree_lc_matrix(tree: SteinerTree) -> list[int]:
    """Checks as bitsets over the tree's edge positions."""
    return [(1 << a) | (1 << b) for _, a, b in tree_lc(tree)]


# -- constructions ------------------------------------------------------------


def packing_protocol(g: Multigraph, A: Iterable[int], n: int = 1, **kw) -> tuple[LinearScheme, KeyMap]:
    """Tree-packing scheme on ``G^(n)``: tree parities plus raw leftover bits.

    One key bit per packed tree, read from the copy of its lexicographically
    smallest edge.
    """
    a = frozenset(A)
    _, packing = mu(g, a, n=n, **kw)
    layout = SourceLayout(g, n)
    next_copy: dict[tuple[int, int], int] = {}
    rows: list[tuple[int, int]] = []
    key_rows: list[int] = []
    for tree in packing.instances():
        coords = []
        for e in tree.edges:
            t = next_copy.get(e, 0)
            next_copy[e] = t + 1
            coords.append(layout.coord(e, t))
        for sender, x, y in tree_lc(tree):
            rows.append((sender, (1 << coords[x]) | (1 << coords[y])))
        key_rows.append(1 << coords[0])
    for e, k in g.edges:
        for t in range(next_copy.get(e, 0), n * k):
            rows.append((e[0], 1 << layout.coord(e, t)))
    rows.sort(key=lambda r: r[0])
    return LinearScheme.from_global(g, n, rows), KeyMap(tuple(key_rows), layout.nbits)


def omniscience_lengths(rates: Iterable[Fraction], n: int, eps: Fraction = DEFAULT_EPSILON) -> list[int]:
    """``ceil(n (R_i + eps))`` per terminal."""
    return [math.ceil(n * (Fraction(r) + eps)) for r in rates]


def random_lco(g: Multigraph, A: Iterable[int], n: int, lengths: Iterable[int],
               seed: int = DEFAULT_SEED) -> tuple[LinearScheme, LCOCheck]:
    """Draw every ``L_i`` with fair-coin entries and test it for omniscience."""
    lengths = list(lengths)
    if len(lengths) != g.m or any(b < 0 for b in lengths):
        raise GraphError("need one nonnegative length per terminal")
    rng = np.random.default_rng(seed)
    layout = SourceLayout(g, n)
    mats = []
    for i, b in zip(g.vertices, lengths):
        w = len(layout.local(i))
        bits = rng.integers(0, 2, size=(b, w), dtype=np.uint8)
        mats.append(tuple(sum(int(v) << k for k, v in enumerate(row)) for row in bits))
    scheme = LinearScheme(g, n, tuple(mats))
    return scheme, is_lco(scheme, g, A, n)


def _check_dims(scheme: LinearScheme, g: Multigraph, n: int):
    if scheme.g != g or scheme.n != n:
        raise GraphError("scheme was built for a different graph or observation length")


def is_lco(scheme: LinearScheme, g: Multigraph, A: Iterable[int], n: int) -> LCOCheck:
    """Whether every terminal of ``A`` recovers the whole source from its bits and the transcript."""
    _check_dims(scheme, g, n)
    layout = scheme.layout
    N = layout.nbits
    stacked = scheme.global_rows()
    for j in sorted(A):
        own = [1 << c for c in layout.local(j)]
        kern = gf2.nullspace(stacked + own, N)
        if kern:
            return LCOCheck(False, j, kern[0])
    return LCOCheck(True)


def extract_key(scheme: LinearScheme, g: Multigraph, n: int) -> KeyMap:
    """Source coordinates outside the pivot columns of the stacked map."""
    _check_dims(scheme, g, n)
    N = scheme.layout.nbits
    free = gf2.non_pivot_columns(scheme.global_rows(), N)
    return KeyMap(tuple(1 << c for c in free), N)


def run(scheme: LinearScheme, key_map: KeyMap, x: SourceRealization,
        A: Iterable[int] | None = None) -> tuple[Transcript, tuple[int, ...], dict[int, tuple[int, ...]]]:
    """Transcript, true key and every terminal's decoded key for one realization.

    With ``A`` given, a terminal of ``A`` that cannot decode raises
    ``DecodingError``; without it every terminal is tried and the ones that
    cannot decode map to ``None``.
    """
    layout = scheme.layout
    N = layout.nbits
    parts = tuple(
        tuple(gf2.parity(layout.lift(i, r) & x.bits) for r in rows)
        for i, rows in enumerate(scheme.matrices, start=1)
    )
    transcript = Transcript(parts)
    key = tuple(gf2.apply(list(key_map.rows), x.bits))
    stacked = scheme.global_rows()
    tbits = list(transcript.bits)
    decoded = {}
    for i in sorted(A) if A is not None else scheme.g.vertices:
        own = [1 << c for c in layout.local(i)]
        system = stacked + own
        if not all(gf2.in_rowspan(r, system, N) for r in key_map.rows):
            if A is None:
                decoded[i] = None
                continue
            raise DecodingError(f"terminal {i} cannot determine the key")
        rhs = tbits + [(x.bits >> c) & 1 for c in layout.local(i)]
        guess = gf2.solve(system, rhs, N)
        if guess is None:
            raise DecodingError(f"inconsistent system at terminal {i}")
        decoded[i] = tuple(gf2.apply(list(key_map.rows), guess))
    return transcript, key, decoded


# -- exhaustive verification --------------------------------------------------


def _code_columns(rows: list[int], N: int) -> list[list[int]]:
    """Column bitsets for ``linear_codes``, in chunks of at most 64 rows."""
    chunks = [rows[k:k + 64] for k in range(0, len(rows), 64)] or [[]]
    out = []
    for chunk in chunks:
        cols = [0] * N
        for r_idx, r in enumerate(chunk):
            for c in range(N):
                if (r >> c) & 1:
                    cols[c] |= 1 << r_idx
        out.append(cols)
    return out


def realization_codes(rows: list[int], N: int, kernel=None) -> np.ndarray:
    """Matrix of shape ``(2**N, words)``: row ``x`` packs the images of ``x``."""
    lc = (kernel or kernels).linear_codes
    return np.stack([lc(cols, N) for cols in _code_columns(rows, N)], axis=1)


def _rows_as_bits(row: np.ndarray, nrows: int) -> tuple[int, ...]:
    out = []
    for k in range(nrows):
        out.append(int(row[k // 64] >> np.uint64(k % 64)) & 1)
    return tuple(out)


def _security_index(T: np.ndarray, K: np.ndarray, keylen: int) -> float:
    pairs, counts = np.unique(np.concatenate([T, K], axis=1), axis=0, return_counts=True)
    tvals, tinv = np.unique(pairs[:, : T.shape[1]], axis=0, return_inverse=True)
    total = counts.sum()
    tcounts = np.bincount(tinv.ravel(), weights=counts)
    p_pair = counts / total
    p_t = tcounts[tinv.ravel()] / total
    h_cond = -np.sum(p_pair * np.log2(p_pair / p_t))
    return float(keylen - h_cond)


def verify_perfect_secrecy(scheme: LinearScheme, key_map: KeyMap, g: Multigraph, A: Iterable[int],
                           n: int, cap: int = DEFAULT_BRUTE_FORCE_BITS, kernel=None) -> SecrecyReport:
    """Exhaust all equiprobable realizations and decide recoverability and ``s(K;F) = 0``.

    Zero security index is decided as exact uniformity of the key given
    each transcript value of positive probability.
    """
    _check_dims(scheme, g, n)
    layout = scheme.layout
    N = layout.nbits
    if N > cap:
        raise CapExceeded(f"{N} source bits exceed the brute-force cap {cap}")
    if N > 62:
        raise CapExceeded("exhaustive verification is limited to 62 source bits")
    stacked = scheme.global_rows()
    keylen = key_map.length
    T = realization_codes(stacked, N, kernel)
    K = realization_codes(list(key_map.rows), N, kernel)
    TK = np.concatenate([T, K], axis=1)
    witness = None

    recoverable = {}
    xs = np.arange(1 << N, dtype=np.uint64)
    for i in sorted(A):
        own = (xs & np.uint64(layout.mask(i)))[:, None]
        OT = np.concatenate([own, T], axis=1)
        trip, first = np.unique(np.concatenate([OT, K], axis=1), axis=0, return_index=True)
        ot = trip[:, : OT.shape[1]]
        dup = np.nonzero(np.all(ot[1:] == ot[:-1], axis=1))[0]
        recoverable[i] = dup.size == 0
        if dup.size and witness is None:
            k0 = int(dup[0])
            witness = {
                "kind": "unrecoverable",
                "terminal": i,
                "realizations": (int(first[k0]), int(first[k0 + 1])),
            }

    pairs, counts = np.unique(TK, axis=0, return_counts=True)
    tw = T.shape[1]
    tpart = pairs[:, :tw]
    starts = np.concatenate([[True], np.any(tpart[1:] != tpart[:-1], axis=1)])
    group = np.cumsum(starts) - 1
    ngroups = int(group[-1]) + 1
    sizes = np.bincount(group, minlength=ngroups)
    first_count = counts[np.nonzero(starts)[0]][group]
    bad_size = sizes != (1 << keylen)
    bad_count = np.zeros(ngroups, dtype=bool)
    np.logical_or.at(bad_count, group, counts != first_count)
    bad = bad_size | bad_count
    uniform = not bool(bad.any())
    distinct_rows = gf2.rank(list(key_map.rows), N) == keylen
    sec_zero = uniform and distinct_rows
    s_value = None
    if not uniform:
        gidx = int(np.nonzero(bad)[0][0])
        sel = group == gidx
        dist = {
            "".join(map(str, _rows_as_bits(kv, keylen))): int(c)
            for kv, c in zip(pairs[sel][:, tw:], counts[sel])
        }
        if witness is None or witness.get("kind") != "skewed":
            witness = {
                "kind": "skewed",
                "transcript": "".join(map(str, _rows_as_bits(tpart[np.nonzero(starts)[0][gidx]], len(stacked)))),
                "key_counts": dist,
                "previous": witness,
            }
        s_value = _security_index(T, K, keylen)
    return SecrecyReport(recoverable, uniform, sec_zero, keylen, ngroups, witness, s_value)


def coset_sizes(scheme: LinearScheme, kernel=None) -> np.ndarray:
    """Number of realizations behind each distinct transcript value."""
    N = scheme.layout.nbits
    T = realization_codes(scheme.global_rows(), N, kernel)
    _, counts = np.unique(T, axis=0, return_counts=True)
    return counts


# -- text serialization -------------------------------------------------------


def _bitrow(v: int, width: int) -> str:
    return "".join("1" if (v >> k) & 1 else "0" for k in range(width))


def _parse_bitrow(s: str, width: int, where: str) -> int:
    if len(s) != width or set(s) - {"0", "1"}:
        raise GraphError(f"{where}: expected {width} characters of 0/1")
    return sum(1 << k for k, ch in enumerate(s) if ch == "1")


def format_scheme(scheme: LinearScheme, key_map: KeyMap | None = None) -> str:
    layout = scheme.layout
    lines = [
        f"scheme m={scheme.g.m} n={scheme.n} bits={layout.nbits}",
        "pairs " + " ".join(f"{i}-{j}:{scheme.n * k}" for (i, j), k in scheme.g.edges),
    ]
    for i, rows in enumerate(scheme.matrices, start=1):
        w = scheme.width(i)
        lines.append(f"terminal {i} rows={len(rows)} cols={w}")
        lines += [_bitrow(r, w) for r in rows]
    if key_map is not None:
        lines.append(f"key rows={key_map.length} cols={key_map.nbits}")
        lines += [_bitrow(r, key_map.nbits) for r in key_map.rows]
    return "\n".join(lines) + "\n"


def parse_scheme(text: str, g: Multigraph) -> tuple[LinearScheme, KeyMap | None]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = dict(kv.split("=") for kv in lines[0].split()[1:])
    n = int(head["n"])
    if int(head["m"]) != g.m or int(head["bits"]) != n * g.size:
        raise GraphError("scheme header does not match the graph")
    pos = 2
    mats = []
    for i in g.vertices:
        tok = lines[pos].split()
        if tok[0] != "terminal" or int(tok[1]) != i:
            raise GraphError(f"line {pos + 1}: expected block for terminal {i}")
        b = int(tok[2].split("=")[1])
        w = int(tok[3].split("=")[1])
        mats.append(tuple(_parse_bitrow(lines[pos + 1 + k], w, f"line {pos + 2 + k}") for k in range(b)))
        pos += 1 + b
    key_map = None
    if pos < len(lines):
        tok = lines[pos].split()
        k = int(tok[1].split("=")[1])
        w = int(tok[2].split("=")[1])
        key_map = KeyMap(tuple(_parse_bitrow(lines[pos + 1 + t], w, f"line {pos + 2 + t}") for t in range(k)), w)
    return LinearScheme(g, n, tuple(mats)), key_map
