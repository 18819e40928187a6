"""Pure-Python kernels; the reference the compiled module must match."""

from __future__ import annotations

import numpy as np

from .exact import CapExceeded

BACKEND = "python"

MEMO_LIMIT = 2_000_000


def gf2_rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over GF(2) of int-bitset rows.

    Bit ``c`` of a row is column ``c``.  Pivot columns are taken in
    increasing order; returns the nonzero reduced rows and their pivots.
    """
    work = [r for r in rows if r]
    out: list[int] = []
    pivots: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        idx = next((k for k, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        work = [r ^ prow if r & bit else r for r in work]
        out = [r ^ prow if r & bit else r for r in out]
        out.append(prow)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    return out, pivots


def linear_codes(cols: list[int], nbits: int) -> np.ndarray:
    """``out[x]`` is the XOR of ``cols[c]`` over the set bits ``c`` of ``x``."""
    out = np.zeros(1 << nbits, dtype=np.uint64)
    for c in range(nbits):
        half = 1 << c
        out[half: 2 * half] = out[:half] ^ np.uint64(cols[c])
    return out


def pack_search(
    cap: list[int],
    tree_pairs: list[list[int]],
    tree_cut: list[list[int]],
    cut_pairs: list[list[int]],
    target: int,
    node_limit: int = 0,
) -> list[int] | None:
    """Find ``target`` trees (indices, nondecreasing) whose pair usage fits ``cap``.

    Depth-first over multisets of tree indices.  A node is cut off when
    the residual capacity of some separating cut, divided by the least
    usage any remaining tree makes of it, cannot host the trees still
    needed; failed residual states are remembered.
    """
    k = len(tree_pairs)
    ncut = len(cut_pairs)
    if target <= 0:
        return []
    if k == 0:
        return None
    big = 1 << 60
    sufcut = [[big] * ncut for _ in range(k + 1)]
    sufsize = [big] * (k + 1)
    for l in range(k - 1, -1, -1):
        sufsize[l] = min(len(tree_pairs[l]), sufsize[l + 1])
        row, nxt = tree_cut[l], sufcut[l + 1]
        sufcut[l] = [min(row[c], nxt[c]) for c in range(ncut)]
    res = list(cap)
    cutres = [sum(cap[p] for p in cp) for cp in cut_pairs]
    total = [sum(cap)]
    chosen: list[int] = []
    failed: set = set()
    nodes = [0]

    def bound(start: int) -> int:
        b = total[0] // sufsize[start]
        sc = sufcut[start]
        for c in range(ncut):
            q = cutres[c] // sc[c]
            if q < b:
                b = q
        return b

    def dfs(start: int, need: int) -> bool:
        if need == 0:
            return True
        nodes[0] += 1
        if node_limit and nodes[0] > node_limit:
            raise CapExceeded(f"packing search exceeded {node_limit} nodes")
        key = (start, need, tuple(res))
        if key in failed:
            return False
        for l in range(start, k):
            if bound(l) < need:
                break
            tp = tree_pairs[l]
            if all(res[p] for p in tp):
                for p in tp:
                    res[p] -= 1
                tc = tree_cut[l]
                for c in range(ncut):
                    cutres[c] -= tc[c]
                total[0] -= len(tp)
                chosen.append(l)
                if dfs(l, need - 1):
                    return True
                chosen.pop()
                total[0] += len(tp)
                for c in range(ncut):
                    cutres[c] += tc[c]
                for p in tp:
                    res[p] += 1
        if len(failed) < MEMO_LIMIT:
            failed.add(key)
        return False

    return list(chosen) if dfs(0, target) else None
