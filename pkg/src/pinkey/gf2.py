"""Linear algebra over GF(2) on int bitsets (bit ``c`` is column ``c``)."""

from __future__ import annotations

from . import kernels


def parity(x: int) -> int:
    return x.bit_count() & 1


def rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    return kernels.gf2_rref(list(rows), ncols)


def rank(rows: list[int], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def in_rowspan(v: int, rows: list[int], ncols: int) -> bool:
    red, piv = rref(rows, ncols)
    for r, c in zip(red, piv):
        if (v >> c) & 1:
            v ^= r
    return v == 0


def nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of ``{x : parity(r & x) = 0 for every row r}``."""
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = 1 << f
        for r, c in zip(red, piv):
            if (r >> f) & 1:
                x |= 1 << c
        basis.append(x)
    return basis


def non_pivot_columns(rows: list[int], ncols: int) -> list[int]:
    _, piv = rref(rows, ncols)
    pivset = set(piv)
    return [c for c in range(ncols) if c not in pivset]


def solve(rows: list[int], rhs: list[int], ncols: int) -> int | None:
    """Some ``x`` with ``parity(rows[k] & x) == rhs[k]`` for all ``k``, or ``None``."""
    aug = [r | (b << ncols) for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    x = 0
    for r, c in zip(red, piv):
        if c == ncols:
            return None
        if (r >> ncols) & 1:
            x |= 1 << c
    return x


def apply(rows: list[int], x: int) -> list[int]:
    return [parity(r & x) for r in rows]
