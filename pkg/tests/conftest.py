from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import settings

from pinkey.graph import Multigraph

settings.register_profile("pinkey", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("pinkey")


def random_graph(rng: random.Random, m_min: int = 3, m_max: int = 6, e_max: int = 3,
                 p: float = 0.6) -> Multigraph:
    """Connected multigraph with each pair present with probability ``p``."""
    while True:
        m = rng.randint(m_min, m_max)
        mult = {}
        for e in itertools.combinations(range(1, m + 1), 2):
            if rng.random() < p:
                mult[e] = rng.randint(1, e_max)
        g = Multigraph.from_dict(m, mult)
        if g.is_connected():
            return g


def random_set(rng: random.Random, m: int) -> frozenset[int]:
    return frozenset(rng.sample(range(1, m + 1), rng.randint(2, m)))


def as_dict(g: Multigraph) -> dict:
    return dict(g.edges)


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
