"""Compare the compiled and pure-Python kernel backends.

Usage::

    python bench/bench_kernels.py [--repeat 3]

Each workload is run through both backends; results are checked for
equality and the best wall-clock time of ``--repeat`` runs is printed.
"""

from __future__ import annotations

import argparse
import random
import time

from pinkey import kernels
from pinkey.graph import complete, figure1, triangle
from pinkey.packing import mu
from pinkey.protocol import SourceLayout, packing_protocol, realization_codes


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


class _Capture:
    """Stands in for a kernel module and records the ``pack_search`` calls."""

    def __init__(self):
        self.calls = []

    def pack_search(self, *args):
        self.calls.append(args)
        return kernels.python.pack_search(*args)


def search_inputs(g, A, n):
    """Kernel inputs ``mu`` builds for ``(g, A, n)``, plus a target one above the optimum."""
    cap = _Capture()
    best = mu(g, A, n=n, kernel=cap)[0]
    capv, tree_pairs, tree_cut, cut_pairs, _, limit = cap.calls[-1]
    return best, (capv, tree_pairs, tree_cut, cut_pairs, best + 1, limit)


def workloads():
    g, A = figure1()
    for label, args in (("figure1 n=5", (g, A, 5)), ("K6 A={1,2,3}", (complete(6), {1, 2, 3}, 1)),
                        ("K5 A={1,2,3} n=2", (complete(5), {1, 2, 3}, 2))):
        best, inputs = search_inputs(*args)
        # one above the optimum: the search must exhaust the tree space
        yield f"pack_search {label} > {best}", lambda k, inputs=inputs: k.pack_search(*inputs)

    rng = random.Random(1)
    rows = [rng.getrandbits(60) for _ in range(2000)]
    yield "gf2_rref 2000x60", lambda k: k.gf2_rref(rows, 60)

    scheme, _ = packing_protocol(triangle(), {1, 2, 3}, 6)
    N = SourceLayout(triangle(), 6).nbits
    yield f"linear_codes N={N}", lambda k: realization_codes(scheme.global_rows(), N, k).tolist()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the python backend is available")
    names = sorted(backends)
    print(f"{'workload':34s} " + " ".join(f"{b:>10s}" for b in names) + "    speedup")
    for label, fn in workloads():
        times, results = {}, {}
        for name in names:
            times[name], results[name] = best_of(lambda: fn(backends[name]), args.repeat)
        assert len({repr(r) for r in results.values()}) == 1, f"backends disagree on {label}"
        cells = " ".join(f"{times[b] * 1e3:8.2f}ms" for b in names)
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
        print(f"{label:34s} {cells} {speed}")


if __name__ == "__main__":
    main()
