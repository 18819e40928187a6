# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

from .exact import CapExceeded

BACKEND = "cython"

MEMO_LIMIT = 2_000_000

cnp.import_array()


def gf2_rref(rows, int ncols):
    if ncols > 64:
        from . import _pykernels
        return _pykernels.gf2_rref(rows, ncols)
    cdef int n = len(rows)
    cdef uint64_t *w = <uint64_t *> malloc(max(n, 1) * sizeof(uint64_t))
    cdef int *piv = <int *> malloc(max(n, 1) * sizeof(int))
    cdef int i, col, nr = 0, k, found
    cdef uint64_t bit, prow, t
    try:
        for i in range(n):
            w[i] = <uint64_t> rows[i]
        for col in range(ncols):
            if nr == n:
                break
            bit = (<uint64_t> 1) << col
            found = -1
            for k in range(nr, n):
                if w[k] & bit:
                    found = k
                    break
            if found < 0:
                continue
            t = w[nr]
            w[nr] = w[found]
            w[found] = t
            prow = w[nr]
            for k in range(n):
                if k != nr and (w[k] & bit):
                    w[k] ^= prow
            piv[nr] = col
            nr += 1
        return [int(w[i]) for i in range(nr)], [piv[i] for i in range(nr)]
    finally:
        free(w)
        free(piv)


def linear_codes(cols, int nbits):
    out = np.zeros(1 << nbits, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef int64_t half, x
    cdef int c
    cdef uint64_t v
    for c in range(nbits):
        half = (<int64_t> 1) << c
        v = <uint64_t> cols[c]
        for x in range(half):
            o[half + x] = o[x] ^ v
    return out


cdef class _Search:
    cdef int k, ncut, npair
    cdef int *res
    cdef int64_t *cutres
    cdef int64_t total
    cdef int *tstart
    cdef int *tflat
    cdef int *tcut
    cdef int64_t *sufcut
    cdef int64_t *sufsize
    cdef int *chosen
    cdef int nchosen
    cdef long long nodes, node_limit
    cdef set failed

    def __cinit__(self, cap, tree_pairs, tree_cut, cut_pairs, long long node_limit):
        cdef int l, c, p, off, npairs_total
        self.k = len(tree_pairs)
        self.ncut = len(cut_pairs)
        self.npair = len(cap)
        self.node_limit = node_limit
        self.nodes = 0
        self.failed = set()
        npairs_total = sum(len(tp) for tp in tree_pairs)
        self.res = <int *> malloc(max(self.npair, 1) * sizeof(int))
        self.cutres = <int64_t *> malloc(max(self.ncut, 1) * sizeof(int64_t))
        self.tstart = <int *> malloc((self.k + 1) * sizeof(int))
        self.tflat = <int *> malloc(max(npairs_total, 1) * sizeof(int))
        self.tcut = <int *> malloc(max(self.k * self.ncut, 1) * sizeof(int))
        self.sufcut = <int64_t *> malloc(max((self.k + 1) * self.ncut, 1) * sizeof(int64_t))
        self.sufsize = <int64_t *> malloc((self.k + 1) * sizeof(int64_t))
        self.chosen = <int *> malloc((self.k + 1024) * sizeof(int))
        self.nchosen = 0
        self.total = 0
        for p in range(self.npair):
            self.res[p] = cap[p]
            self.total += cap[p]
        for c in range(self.ncut):
            self.cutres[c] = sum(cap[p] for p in cut_pairs[c])
        off = 0
        for l in range(self.k):
            self.tstart[l] = off
            for p in tree_pairs[l]:
                self.tflat[off] = p
                off += 1
            for c in range(self.ncut):
                self.tcut[l * self.ncut + c] = tree_cut[l][c]
        self.tstart[self.k] = off
        big = 1 << 60
        for c in range(self.ncut):
            self.sufcut[self.k * self.ncut + c] = big
        self.sufsize[self.k] = big
        for l in range(self.k - 1, -1, -1):
            self.sufsize[l] = min(self.tstart[l + 1] - self.tstart[l], self.sufsize[l + 1])
            for c in range(self.ncut):
                self.sufcut[l * self.ncut + c] = min(self.tcut[l * self.ncut + c],
                                                     self.sufcut[(l + 1) * self.ncut + c])

    def __dealloc__(self):
        free(self.res)
        free(self.cutres)
        free(self.tstart)
        free(self.tflat)
        free(self.tcut)
        free(self.sufcut)
        free(self.sufsize)
        free(self.chosen)

    cdef int64_t bound(self, int start):
        cdef int64_t b = self.total // self.sufsize[start]
        cdef int64_t q
        cdef int c
        cdef int64_t *sc = self.sufcut + start * self.ncut
        for c in range(self.ncut):
            q = self.cutres[c] // sc[c]
            if q < b:
                b = q
        return b

    cdef bytes key(self, int start, int need):
        cdef list parts = [start, need]
        cdef int p
        for p in range(self.npair):
            parts.append(self.res[p])
        return repr(parts).encode()

    cdef int dfs(self, int start, int need) except -1:
        cdef int l, i, c, fits
        cdef int s, e
        if need == 0:
            return 1
        self.nodes += 1
        if self.node_limit and self.nodes > self.node_limit:
            raise CapExceeded(f"packing search exceeded {self.node_limit} nodes")
        key = self.key(start, need)
        if key in self.failed:
            return 0
        for l in range(start, self.k):
            if self.bound(l) < need:
                break
            s = self.tstart[l]
            e = self.tstart[l + 1]
            fits = 1
            for i in range(s, e):
                if self.res[self.tflat[i]] == 0:
                    fits = 0
                    break
            if not fits:
                continue
            for i in range(s, e):
                self.res[self.tflat[i]] -= 1
            for c in range(self.ncut):
                self.cutres[c] -= self.tcut[l * self.ncut + c]
            self.total -= e - s
            self.chosen[self.nchosen] = l
            self.nchosen += 1
            if self.dfs(l, need - 1):
                return 1
            self.nchosen -= 1
            self.total += e - s
            for c in range(self.ncut):
                self.cutres[c] += self.tcut[l * self.ncut + c]
            for i in range(s, e):
                self.res[self.tflat[i]] += 1
        if len(self.failed) < MEMO_LIMIT:
            self.failed.add(key)
        return 0

    def run(self, int target):
        if self.dfs(0, target):
            return [self.chosen[i] for i in range(self.nchosen)]
        return None


def pack_search(cap, tree_pairs, tree_cut, cut_pairs, int target, long long node_limit=0):
    if target <= 0:
        return []
    if len(tree_pairs) == 0:
        return None
    if target > 1000:
        from . import _pykernels
        return _pykernels.pack_search(cap, tree_pairs, tree_cut, cut_pairs, target, node_limit)
    return _Search(cap, tree_pairs, tree_cut, cut_pairs, node_limit).run(target)
