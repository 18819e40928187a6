"""Command-line front end.

Reports are ``key: value`` lines (or JSON with ``--json``).  Rationals are
written exactly as ``p/q``.  Exit status: 0 success, 2 input error, 3 cap
exceeded, 4 a verdict came out false.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import kernels
from .exact import CapExceeded, solve_ilp, solve_lp
from .graph import GraphError, Multigraph, blow_up, figure1, parse_graph_text
from .helper import DEFAULT_BOX_CAP, prop6_bounds, reduce_to_spanning, thm7_check, weak_helper_ilp, weak_helper_lp
from .graph import degree
from .omniscience import DEFAULT_MAX_TERMINALS, int_omn, omn, omniscience_program, partition_bound
from .packing import DEFAULT_TREE_CAP, mu, mu_f
from .protocol import (
    DEFAULT_BRUTE_FORCE_BITS,
    DEFAULT_EPSILON,
    DEFAULT_SEED,
    extract_key,
    omniscience_lengths,
    packing_protocol,
    random_lco,
    verify_perfect_secrecy,
)

SCHEMA = "pinkey-report/1"
EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERDICT = 0, 2, 3, 4

FIGURE1_CAPACITY = Fraction(2)
FIGURE1_MU_F = Fraction(9, 5)


def render(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return "[" + " ".join(render(x) for x in v) + "]"
    if v is None:
        return "none"
    return str(v)


def jsonable(v):
    if isinstance(v, Fraction):
        return render(v)
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    return v


class Report:
    def __init__(self, command: str):
        self.items: list[tuple[str, object]] = [("schema", SCHEMA), ("command", command)]
        self.failed = False

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def verdict(self, key: str, ok: bool) -> None:
        self.add(key, ok)
        self.failed |= not ok

    def text(self) -> str:
        return "".join(f"{k}: {render(v)}\n" for k, v in self.items)

    def json(self) -> str:
        return json.dumps({k: jsonable(v) for k, v in self.items}, indent=2) + "\n"


def _fmt_edges(g: Multigraph) -> list[str]:
    return [f"{i}-{j}:{k}" for (i, j), k in g.edges]


def _load(args) -> tuple[Multigraph, frozenset[int]]:
    try:
        with open(args.graph, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphError(f"{args.graph}: {exc.strerror}") from None
    g, A = parse_graph_text(text, args.graph)
    if args.set:
        try:
            A = frozenset(int(t) for t in args.set.replace(",", " ").split())
        except ValueError:
            raise GraphError(f"--set: bad member list {args.set!r}") from None
        bad = [a for a in A if not 1 <= a <= g.m]
        if bad:
            raise GraphError(f"--set: members {bad} out of range 1..{g.m}")
    if len(A) < 2:
        raise GraphError(f"{args.graph}: the set A needs at least 2 terminals")
    return g, A


def _digest(rep: Report, g: Multigraph, A) -> None:
    rep.add("graph.m", g.m)
    rep.add("graph.edges", g.size)
    rep.add("graph.A", sorted(A))


def cmd_capacity(args, rep: Report) -> None:
    g, A = _load(args)
    _digest(rep, g, A)
    sol = omn(g, A, max_terminals=args.cap_terminals)
    cap = g.size - sol.value
    bound = partition_bound(g, A, max_terminals=args.cap_terminals)
    rep.add("capacity", cap)
    rep.add("omn", sol.value)
    rep.add("rates", sol.rates)
    rep.add("partition_bound", bound)
    rep.verdict("partition_bound_consistent", cap <= bound)
    if args.stats:
        rep.add("solver.pivots", solve_lp(omniscience_program(g, A)).pivots)


def cmd_packing(args, rep: Report) -> None:
    g, A = _load(args)
    _digest(rep, g, A)
    n = args.n
    gn = blow_up(g, n)
    rep.add("n", n)
    if args.mode in ("integer", "both"):
        val, packing = mu(g, A, n=n, cap=args.cap_trees, node_limit=args.cap_nodes)
        rep.add("mu", val)
        rep.add("mu_per_n", Fraction(val, n))
        rep.add("packing", [f"{'+'.join(f'{i}-{j}' for i, j in t.edges)}x{c}" for t, c in packing.trees])
        io = int_omn(g, A, n=n, max_terminals=args.cap_terminals).value
        bound = n * g.size - io
        rep.add("int_omn", io)
        rep.add("int_bound", bound)
        rep.verdict("mu_within_int_bound", val <= bound)
        rep.add("int_bound_attained", val == bound)
        if args.stats:
            gn_bounds = [(0, degree(gn, i)) for i in g.vertices]
            res = solve_ilp(omniscience_program(gn, A), bounds=gn_bounds)
            rep.add("solver.nodes", res.nodes)
            rep.add("solver.pivots", res.pivots)
    if args.mode in ("fractional", "both"):
        val, _ = mu_f(gn, A, cap=args.cap_trees)
        cap = gn.size - omn(gn, A, max_terminals=args.cap_terminals).value
        rep.add("mu_f", val)
        rep.add("capacity", cap)
        rep.verdict("sandwich", cap / 2 <= val <= cap)


def cmd_protocol(args, rep: Report) -> None:
    g, A = _load(args)
    _digest(rep, g, A)
    n = args.n
    rep.add("n", n)
    rep.add("scheme", args.scheme)
    if args.scheme == "packing":
        scheme, key_map = packing_protocol(g, A, n, cap=args.cap_trees, node_limit=args.cap_nodes)
    else:
        if args.lengths:
            lengths = [int(t) for t in args.lengths.replace(",", " ").split()]
        else:
            lengths = omniscience_lengths(omn(g, A).rates, n, Fraction(args.eps))
        rep.add("lengths", lengths)
        scheme = None
        for attempt in range(args.retries):
            cand, check = random_lco(g, A, n, lengths, args.seed + attempt)
            if check.ok:
                scheme = cand
                break
        rep.add("attempts", attempt + 1)
        rep.verdict("omniscience", scheme is not None)
        if scheme is None:
            rep.add("failure_terminal", check.terminal)
            rep.add("failure_witness", format(check.witness, "b")[::-1])
            return
        key_map = extract_key(scheme, g, n)
    rep.add("source_bits", scheme.layout.nbits)
    rep.add("communication_bits", scheme.length)
    rep.add("per_terminal_bits", scheme.lengths)
    rep.add("key_bits", key_map.length)
    if args.verify:
        res = verify_perfect_secrecy(scheme, key_map, g, A, n, cap=args.cap_bits)
        rep.add("recoverable", [f"{i}:{render(v)}" for i, v in sorted(res.recoverable.items())])
        rep.add("uniform_conditional", res.uniform_conditional)
        rep.verdict("perfect_secrecy", res.ok)
        if res.witness is not None:
            rep.add("witness", json.dumps(jsonable(res.witness), sort_keys=True))
        if res.security_index is not None:
            rep.add("security_index_display", f"{res.security_index:.6f}")


def cmd_helper(args, rep: Report) -> None:
    g, A = _load(args)
    if A != frozenset(range(1, g.m)):
        raise GraphError(
            f"{args.graph}: helper analysis needs A = 1..{g.m - 1} (found {g.m - len(A)} helpers)"
        )
    _digest(rep, g, A)
    lp = weak_helper_lp(g)
    ilp = weak_helper_ilp(g)
    rep.add("weak_helper_lp", lp.holds)
    rep.add("weak_helper_lp.rates", lp.witness)
    rep.add("weak_helper_ilp", ilp.holds)
    rep.add("weak_helper_ilp.lengths", ilp.witness)
    table = prop6_bounds(g, cap=args.cap_box)
    for name, b in table.rows():
        rep.add(f"decomposition.{name}", f"{render(b.lhs)} vs {render(b.rhs)}")
        rep.verdict(f"decomposition.{name}.holds", b.holds)
    t7 = thm7_check(g, table)
    rep.add("equality.fractional", t7.fractional_equality)
    rep.add("equality.integer", t7.integer_equality)
    rep.add("direct.mu_f", t7.mu_f)
    rep.add("direct.capacity", t7.capacity)
    rep.add("direct.mu", t7.mu)
    rep.add("direct.int_gap", t7.int_gap)
    rep.verdict("equality.consistent_with_direct", t7.consistent)
    if ilp.holds:
        chain = reduce_to_spanning(g)
        for k, step in enumerate(chain.steps, start=1):
            pair = "start" if step.pair is None else f"{step.pair[0]}-{step.pair[1]}"
            rep.add(f"chain.{k}", f"{pair} edges={render(_fmt_edges(step.graph))} gap={step.gap} mu={step.mu}")
        rep.verdict("chain.constant", chain.constant)
        rep.verdict("chain.certified", chain.certified)


def cmd_reproduce(args, rep: Report) -> None:
    g, A = figure1()
    _digest(rep, g, A)
    cap = g.size - omn(g, A).value
    val, _ = mu_f(g, A)
    rep.add("capacity", cap)
    rep.add("mu_f", val)
    rep.verdict("capacity_matches", cap == FIGURE1_CAPACITY)
    rep.verdict("mu_f_matches", val == FIGURE1_MU_F)
    if args.n:
        m_n, _ = mu(g, A, n=args.n)
        rep.add("n", args.n)
        rep.add("mu", m_n)
        rep.add("mu_per_n", Fraction(m_n, args.n))
        rep.verdict("mu_per_n_within_mu_f", Fraction(m_n, args.n) <= val)
    if args.verify_protocol:
        scheme, key_map = packing_protocol(g, A, 1)
        res = verify_perfect_secrecy(scheme, key_map, g, A, 1)
        rep.add("protocol.key_bits", key_map.length)
        rep.add("protocol.communication_bits", scheme.length)
        rep.verdict("protocol.perfect_secrecy", res.ok)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinkey", description="Secret keys and tree packing on pairwise-shared bits.")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of key: value lines")
    parser.add_argument("--timing", action="store_true", help="append wall-clock time (breaks byte-identical output)")
    parser.add_argument("--stats", action="store_true", help="report solver pivot and node counts")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_args(p):
        p.add_argument("--graph", required=True, help="graph file: 'm <count> A <members>' then 'i j e_ij' lines")
        p.add_argument("--set", help="override A, e.g. '1,3'")
        p.add_argument("--cap-terminals", type=int, default=DEFAULT_MAX_TERMINALS)

    p = sub.add_parser("capacity", help="capacity, omniscience rates and partition bound")
    graph_args(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("packing", help="integer and fractional Steiner tree packing")
    graph_args(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--mode", choices=("integer", "fractional", "both"), default="both")
    p.add_argument("--cap-trees", type=int, default=DEFAULT_TREE_CAP)
    p.add_argument("--cap-nodes", type=int, default=0, help="search node limit (0 = none)")
    p.set_defaults(func=cmd_packing)

    p = sub.add_parser("protocol", help="build a key-generation scheme and optionally verify it")
    graph_args(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--scheme", choices=("packing", "random"), default="packing")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--retries", type=int, default=1)
    p.add_argument("--eps", default=str(DEFAULT_EPSILON), help="rate slack for random schemes, e.g. 1/10")
    p.add_argument("--lengths", help="explicit per-terminal lengths for random schemes")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--cap-bits", type=int, default=DEFAULT_BRUTE_FORCE_BITS)
    p.add_argument("--cap-trees", type=int, default=DEFAULT_TREE_CAP)
    p.add_argument("--cap-nodes", type=int, default=0)
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("helper", help="single-helper analysis (A = 1..m-1)")
    graph_args(p)
    p.add_argument("--cap-box", type=int, default=DEFAULT_BOX_CAP)
    p.set_defaults(func=cmd_helper)

    p = sub.add_parser("reproduce", help="built-in seven-terminal example")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--verify-protocol", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("packing", "protocol") and args.n < 1 or getattr(args, "n", 0) < 0:
        print("error: --n must be a positive integer", file=sys.stderr)
        return EXIT_INPUT
    rep = Report(args.command)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except (GraphError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.timing:
        rep.add("backend", kernels.BACKEND)
        rep.add("seconds", f"{time.perf_counter() - start:.3f}")
    sys.stdout.write(rep.json() if args.json else rep.text())
    return EXIT_VERDICT if rep.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
