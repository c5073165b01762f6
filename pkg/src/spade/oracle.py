"""Independent ground truth for property tests and verification.

Everything here is deliberately naive: the exhaustive densest-subgraph
search enumerates all 2^n - 1 subsets, the reference peel rescans every
remaining vertex at every step, and densities are evaluated straight from
the definition.  None of it shares code with the production peeling or the
incremental reorder, so agreement between the two is meaningful evidence.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InstanceTooLargeError, TooManyEdgesError
from .graph import DynamicGraph

_MAX_EXHAUSTIVE = 20


@dataclass
class ExactDensest:
    """Optimal vertex set and its density, from exhaustive search."""

    vertices: frozenset
    density: float


def f_split(graph: DynamicGraph, subset):
    """(f_V(S), f_E(S), f(S)) for the induced subgraph on ``subset``."""
    s = set(subset)
    fv = sum(graph.vertex_weight(u) for u in s)
    fe = sum(c for u in s for v, c in graph.out_edges(u).items() if v in s)
    return fv, fe, fv + fe


def subset_density(graph: DynamicGraph, subset) -> float:
    s = set(subset)
    if not s:
        return 0.0
    return f_split(graph, s)[2] / len(s)


def densest_exact(graph: DynamicGraph) -> ExactDensest:
    """Exhaustive argmax of g over all non-empty subsets.

    Ties go to the larger set, then to the lexicographically smallest
    id tuple.  Limited to |V| <= 20.
    """
    n = graph.num_vertices
    if n > _MAX_EXHAUSTIVE:
        raise InstanceTooLargeError(f"exhaustive search capped at {_MAX_EXHAUSTIVE} vertices")
    if n == 0:
        return ExactDensest(frozenset(), 0.0)

    a = [graph.vertex_weight(u) for u in graph.vertices()]
    out_masked = []  # per-vertex list of (neighbor bit, weight)
    for u in graph.vertices():
        out_masked.append([(1 << v, c) for v, c in graph.out_edges(u).items()])

    # f over all subsets by peeling off the lowest set bit
    f = [0.0] * (1 << n)
    lowbit_vertex = {1 << v: v for v in range(n)}
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = lowbit_vertex[low]
        rest = mask ^ low
        val = f[rest] + a[v]
        for bit, c in out_masked[v]:
            if bit & rest:
                val += c
        for u, c in graph.in_edges(v).items():
            if (1 << u) & rest:
                val += c
        f[mask] = val

    best_mask, best_d = 0, float("-inf")
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        d = f[mask] / size
        if d > best_d:
            best_mask, best_d = mask, d
        elif d == best_d and size > best_mask.bit_count():
            best_mask = mask
    members = frozenset(v for v in range(n) if (1 << v) & best_mask)
    return ExactDensest(members, best_d)


def reference_peel(graph: DynamicGraph):
    """From-scratch peel with no heap: rescan all remaining vertices each
    step, remove the (weight, id) minimum.  Returns (order, deltas)."""
    remaining = set(graph.vertices())
    order, deltas = [], []
    while remaining:
        best = None
        for u in sorted(remaining):
            w = graph.vertex_weight(u)
            for v, c in graph.out_edges(u).items():
                if v in remaining:
                    w += c
            for v, c in graph.in_edges(u).items():
                if v in remaining:
                    w += c
            if best is None or (w, u) < best:
                best = (w, u)
        w, u = best
        remaining.discard(u)
        order.append(u)
        deltas.append(w)
    return order, deltas


def gen_random(n, m, seed, weight_law="int", vertex_weight=0,
               power_law=False) -> DynamicGraph:
    """Reproducible random directed graph.

    ``weight_law``: "int" draws integer weights 1..10 (exact-equality
    friendly), "uniform" draws floats in (0, 1].  ``power_law`` biases
    endpoint choice toward already-popular vertices, giving a heavy-tailed
    degree profile for performance tests.
    """
    if m > n * (n - 1):
        raise TooManyEdgesError(f"{m} edges impossible on {n} vertices")
    rng = random.Random(seed)
    g = DynamicGraph()
    for i in range(n):
        g.add_vertex(f"v{i}", vertex_weight)
    if n < 2:
        return g

    def draw_weight():
        return rng.randint(1, 10) if weight_law == "int" else rng.uniform(1e-6, 1.0)

    if power_law:
        # preferential attachment flavor: repeat previously used endpoints
        pool = list(range(n))
        added = 0
        while added < m:
            src = rng.choice(pool)
            dst = rng.choice(pool)
            if src == dst:
                continue
            merged = g.add_edge(src, dst, draw_weight())
            if not merged:
                added += 1
            pool.append(src)
            pool.append(dst)
        return g

    seen = set()
    while len(seen) < m:
        src = rng.randrange(n)
        dst = rng.randrange(n)
        if src == dst or (src, dst) in seen:
            continue
        seen.add((src, dst))
        g.add_edge(src, dst, draw_weight())
    return g
