"""Exact rational linear and integer programming.

The simplex runs on an integer-preserving tableau: every entry is an
integer and the true tableau is ``M / D`` with ``D`` the current basis
determinant.  Programs whose slack basis is dual feasible (minimise with
nonnegative costs, inequality rows only) go through the dual simplex and
skip phase one; everything else runs two-phase primal simplex.  Both use
Bland-style lowest-index rules, so they terminate and the witnesses are
reproducible.  Nothing here touches floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

Rational = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELS = {">=", "<=", "=="}


class CapExceeded(RuntimeError):
    """A configured enumeration or size cap was hit."""


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def holds(self, x: Sequence) -> bool:
        lhs = sum(c * v for c, v in zip(self.coeffs, x) if c)
        if self.rel == ">=":
            return lhs >= self.rhs
        if self.rel == "<=":
            return lhs <= self.rhs
        return lhs == self.rhs


@dataclass
class LinearProgram:
    """``sense`` of ``objective . x`` subject to rows and ``x >= lower``."""

    objective: list
    constraints: list[Constraint] = field(default_factory=list)
    sense: str = "min"
    lower: list | None = None

    def __post_init__(self):
        self.objective = [Fraction(c) for c in self.objective]
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if self.lower is None:
            self.lower = [Fraction(0)] * len(self.objective)
        else:
            self.lower = [Fraction(v) for v in self.lower]
        for con in self.constraints:
            self._check(con)

    @property
    def nvars(self) -> int:
        return len(self.objective)

    def _check(self, con: Constraint):
        if len(con.coeffs) != self.nvars:
            raise ValueError(f"row arity {len(con.coeffs)} != {self.nvars} variables")
        if con.rel not in _RELS:
            raise ValueError(f"unknown relation {con.rel!r}")

    def add(self, coeffs: Sequence, rel: str, rhs) -> "LinearProgram":
        con = Constraint(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs))
        self._check(con)
        self.constraints.append(con)
        return self

    def copy(self) -> "LinearProgram":
        return LinearProgram(list(self.objective), list(self.constraints), self.sense, list(self.lower))

    def feasible(self, x: Sequence) -> bool:
        return all(v >= lo for v, lo in zip(x, self.lower)) and all(c.holds(x) for c in self.constraints)

    def value(self, x: Sequence) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))


@dataclass
class OptResult:
    status: str
    value: Fraction | None = None
    x: list[Fraction] | None = None
    duals: list[Fraction] | None = None
    pivots: int = 0
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


class _Tableau:
    """Integer tableau; row 0 is phase-2 costs, row 1 phase-1 costs."""

    def __init__(self, rows: list[list[int]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols
        self.D = 1
        self.pivots = 0

    def pivot(self, r: int, s: int):
        rows = self.rows
        prow = rows[r]
        p = prow[s]
        D = self.D
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[s]
            if f == 0:
                if p != D:
                    rows[i] = [a * p // D for a in row]
            else:
                rows[i] = [(a * p - f * b) // D for a, b in zip(row, prow)]
        self.D = p
        if p < 0:
            self.D = -p
            self.rows = [[-a for a in row] for row in rows]
        self.basis[r - 2] = s
        self.pivots += 1

    def entering(self, cost_row: int, allowed: int) -> int | None:
        row = self.rows[cost_row]
        for j in range(allowed):
            if row[j] < 0:
                return j
        return None

    def leaving(self, s: int) -> int | None:
        best = None
        for i in range(2, len(self.rows)):
            a = self.rows[i][s]
            if a <= 0:
                continue
            b = self.rows[i][-1]
            if best is None:
                best = (i, b, a)
                continue
            _, bb, ba = best
            lhs, rhs = b * ba, bb * a
            if lhs < rhs or (lhs == rhs and self.basis[i - 2] < self.basis[best[0] - 2]):
                best = (i, b, a)
        return None if best is None else best[0]


def _scaled_rows(A, rels, b, flip):
    """Integer rows ``(coeffs, rel, rhs, sign, scale)``; ``flip`` decides negation."""
    out = []
    for a_i, rel, b_i in zip(A, rels, b):
        sg = -1 if flip(rel, b_i) else 1
        if sg < 0:
            rel = {">=": "<=", "<=": ">=", "==": "=="}[rel]
        L = _lcm_den(list(a_i) + [b_i])
        out.append(([int(sg * v * L) for v in a_i], rel, int(sg * b_i * L), sg, L))
    return out


def _finish(tab: _Tableau, n: int, ident, irows, Lc):
    D = tab.D
    x = [Fraction(0)] * n
    for r, col in enumerate(tab.basis):
        if col < n:
            x[col] = Fraction(tab.rows[r + 2][-1], D)
    cost_row = tab.rows[0]
    duals = [Fraction(-cost_row[ident[i]] * sg * L, D * Lc) for i, (_, _, _, sg, L) in enumerate(irows)]
    return OPTIMAL, x, duals, tab.pivots


def _dual_simplex(A, rels, b, c):
    """Slack basis is dual feasible when every cost is nonnegative."""
    n = len(c)
    irows = _scaled_rows(A, rels, b, lambda rel, _: rel == ">=")
    ncols = n + len(irows)
    rows, basis = [], []
    for k, (coeffs, _, rhs, _, _) in enumerate(irows):
        row = coeffs + [0] * len(irows) + [rhs]
        row[n + k] = 1
        rows.append(row)
        basis.append(n + k)
    Lc = _lcm_den(c)
    cost = [int(v * Lc) for v in c] + [0] * (len(irows) + 1)
    tab = _Tableau([cost, [0] * (ncols + 1)] + rows, basis, ncols)
    while True:
        r = None
        for i in range(2, len(tab.rows)):
            if tab.rows[i][-1] < 0 and (r is None or tab.basis[i - 2] < tab.basis[r - 2]):
                r = i
        if r is None:
            break
        row, d = tab.rows[r], tab.rows[0]
        s = None
        for j in range(ncols):
            a = row[j]
            if a >= 0:
                continue
            if s is None or d[j] * (-row[s]) < d[s] * (-a):
                s = j
        if s is None:
            return INFEASIBLE, None, None, tab.pivots
        tab.pivot(r, s)
    return _finish(tab, n, list(range(n, ncols)), irows, Lc)


def _standard_simplex(A: list[list[Fraction]], rels: list[str], b: list[Fraction], c: list[Fraction]):
    """Minimise ``c.x`` subject to ``A x (rel) b``, ``x >= 0``."""
    if all(v >= 0 for v in c) and "==" not in rels:
        return _dual_simplex(A, rels, b, c)
    n = len(c)
    irows = _scaled_rows(A, rels, b, lambda _, b_i: b_i < 0)

    n_slack = sum(1 for _, rel, _, _, _ in irows if rel != "==")
    n_art = sum(1 for _, rel, _, _, _ in irows if rel != "<=")
    art_start = n + n_slack
    ncols = art_start + n_art
    rows: list[list[int]] = []
    basis: list[int] = []
    ident: list[int] = []
    sk, ak = n, art_start
    for coeffs, rel, rhs, _, _ in irows:
        row = coeffs + [0] * (ncols - n) + [rhs]
        if rel == "<=":
            row[sk] = 1
            basis.append(sk)
            ident.append(sk)
            sk += 1
        else:
            if rel == ">=":
                row[sk] = -1
                sk += 1
            row[ak] = 1
            basis.append(ak)
            ident.append(ak)
            ak += 1
        rows.append(row)

    Lc = _lcm_den(c)
    cost = [int(v * Lc) for v in c] + [0] * (ncols - n) + [0]
    phase1 = [0] * (ncols + 1)
    for row, bcol in zip(rows, basis):
        if bcol >= art_start:
            for j in range(art_start):
                phase1[j] -= row[j]
            phase1[-1] -= row[-1]
    tab = _Tableau([cost, phase1] + rows, basis, ncols)

    if n_art:
        while True:
            s = tab.entering(1, ncols)
            if s is None:
                break
            r = tab.leaving(s)
            tab.pivot(r, s)
        if tab.rows[1][-1] != 0:
            return INFEASIBLE, None, None, tab.pivots
        for r in range(2, len(tab.rows)):
            if tab.basis[r - 2] >= art_start:
                row = tab.rows[r]
                s = next((j for j in range(art_start) if row[j] != 0), None)
                if s is not None:
                    tab.pivot(r, s)

    while True:
        s = tab.entering(0, art_start)
        if s is None:
            break
        r = tab.leaving(s)
        if r is None:
            return UNBOUNDED, None, None, tab.pivots
        tab.pivot(r, s)
    return _finish(tab, n, ident, irows, Lc)


def solve_lp(p: LinearProgram) -> OptResult:
    """Exact optimum of ``p`` with a witness satisfying every row exactly."""
    n = p.nvars
    lo = p.lower
    c = list(p.objective) if p.sense == "min" else [-v for v in p.objective]
    A, rels, b = [], [], []
    for con in p.constraints:
        shift = sum((a * l for a, l in zip(con.coeffs, lo) if a and l), Fraction(0))
        A.append(list(con.coeffs))
        rels.append(con.rel)
        b.append(con.rhs - shift)
    status, xs, duals, pivots = _standard_simplex(A, rels, b, c)
    if status != OPTIMAL:
        return OptResult(status, pivots=pivots)
    x = [v + l for v, l in zip(xs, lo)]
    val = p.value(x)
    if p.sense == "max":
        duals = [-y for y in duals]
    return OptResult(OPTIMAL, val, x, duals, pivots=pivots)


def _integral_objective(p: LinearProgram, integral: Sequence[bool]) -> bool:
    return all((c == 0) or (mask and c.denominator == 1) for c, mask in zip(p.objective, integral))


def solve_ilp(
    p: LinearProgram,
    integral: Sequence[bool] | None = None,
    bounds: Sequence[tuple[int, int] | None] | None = None,
    node_limit: int | None = None,
) -> OptResult:
    """Branch and bound over the LP relaxation.

    Branches on the lowest-index fractional variable, ``floor`` side first.
    ``bounds`` optionally adds finite integer boxes for marked variables.
    """
    n = p.nvars
    integral = [True] * n if integral is None else list(integral)
    base = p.copy()
    if bounds is not None:
        for j, bd in enumerate(bounds):
            if bd is None:
                continue
            lo_b, hi_b = bd
            base.lower[j] = max(base.lower[j], Fraction(lo_b))
            row = [0] * n
            row[j] = 1
            base.add(row, "<=", hi_b)
    sgn = 1 if p.sense == "min" else -1
    round_bound = _integral_objective(p, integral)

    best_val: Fraction | None = None
    best_x: list[Fraction] | None = None
    stats = {"pivots": 0, "nodes": 0}
    unbounded = False

    def node(lower: list[Fraction], upper: dict[int, int]):
        nonlocal best_val, best_x, unbounded
        if node_limit is not None and stats["nodes"] >= node_limit:
            raise CapExceeded(f"branch-and-bound node limit {node_limit} reached")
        stats["nodes"] += 1
        sub = LinearProgram(base.objective, list(base.constraints), base.sense, lower)
        for j, hi in sorted(upper.items()):
            row = [0] * n
            row[j] = 1
            sub.add(row, "<=", hi)
        res = solve_lp(sub)
        stats["pivots"] += res.pivots
        if res.status == INFEASIBLE:
            return
        if res.status == UNBOUNDED:
            unbounded = True
            return
        key = sgn * res.value
        if round_bound:
            key = Fraction(math.ceil(key))
        if best_val is not None and key >= sgn * best_val:
            return
        frac = next((j for j in range(n) if integral[j] and res.x[j].denominator != 1), None)
        if frac is None:
            best_val, best_x = res.value, res.x
            return
        v = res.x[frac]
        fl = math.floor(v)
        up = dict(upper)
        up[frac] = min(up.get(frac, fl), fl)
        node(lower, up)
        lo2 = list(lower)
        lo2[frac] = Fraction(fl + 1)
        node(lo2, upper)

    node(list(base.lower), {})
    if unbounded and best_val is None:
        return OptResult(UNBOUNDED, pivots=stats["pivots"], nodes=stats["nodes"])
    if best_val is None:
        return OptResult(INFEASIBLE, pivots=stats["pivots"], nodes=stats["nodes"])
    return OptResult(OPTIMAL, best_val, best_x, pivots=stats["pivots"], nodes=stats["nodes"])


def enumerate_integer_points(
    p: LinearProgram, bounds: Sequence[tuple[int, int]], limit: int = 10**6
) -> Iterator[tuple[int, ...]]:
    """Every integer point of the box satisfying all rows, in lexicographic order."""
    if len(bounds) != p.nvars:
        raise ValueError("one range per variable required")
    volume = 1
    for lo, hi in bounds:
        volume *= max(0, hi - lo + 1)
    if volume > limit:
        raise CapExceeded(f"box volume {volume} exceeds limit {limit}")
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    for pt in itertools.product(*ranges):
        if p.feasible(pt):
            yield pt


def brute_force_min(p: LinearProgram, bounds: Sequence[tuple[int, int]], limit: int = 10**6):
    """Exhaustive optimum over a box; ``(value, point)`` or ``(None, None)``."""
    best = None
    arg = None
    for pt in enumerate_integer_points(p, bounds, limit):
        v = p.value(pt)
        if best is None or (v < best if p.sense == "min" else v > best):
            best, arg = v, pt
    return best, arg
