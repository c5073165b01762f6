import random

import pytest

from spade.graph import DynamicGraph
from spade.oracle import gen_random
from spade.peeling import peel


def build_graph(edges, n=None, vertex_weight=0):
    """Graph from (src, dst, c) triples over integer vertex ids."""
    if n is None:
        n = 1 + max(max(u, v) for u, v, _ in edges) if edges else 0
    g = DynamicGraph()
    for i in range(n):
        g.add_vertex(f"v{i}", vertex_weight)
    for u, v, c in edges:
        g.add_edge(u, v, c)
    return g


def assert_matches_static(seq, graph):
    """The maintained sequence must equal a from-scratch peel exactly."""
    fresh, _ = peel(graph)
    assert seq.order == fresh.order
    assert seq.delta == fresh.delta
    assert seq.pos == fresh.pos


def random_case(case, max_n=30, max_m=120):
    rng = random.Random(case)
    n = rng.randint(2, max_n)
    m = rng.randint(0, min(max_m, n * (n - 1)))
    return gen_random(n, m, case * 31 + 1), rng


@pytest.fixture
def triangle():
    return build_graph([(0, 1, 1), (1, 2, 1), (2, 0, 1)])
