"""Static greedy peeling.

``peel`` repeatedly removes the vertex whose removal decreases the total
suspiciousness f the least (ties broken by smallest vertex id), recording
the removal order O, the peeling weight of each removal, and the densest
prefix.  Removing the minimum-weight vertex is equivalent to maximizing the
density of the remainder, since g(S \\ {u}) = (f(S) - w_u(S)) / (|S| - 1)
is decreasing in w_u(S).

The min-heap uses lazy invalidation: stale entries are skipped on pop, and
the (weight, id) key preserves the global tie-break order.  Integer weights
stay integers throughout so the incremental reorder can be compared for
exact equality.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import BadPrefixIndexError
from .graph import DynamicGraph

_DENSITY_TOL = 1e-9


@dataclass
class ReorderStats:
    """Size of the area an (incremental) operation actually inspected."""

    touched_vertices: int = 0
    touched_edges: int = 0
    elapsed: float = 0.0
    heap_ops: int = 0


@dataclass
class DetectionResult:
    """Densest prefix of the peeling sequence: the fraudulent community."""

    community: frozenset
    density: float
    prefix_index: int
    stats: ReorderStats = field(default_factory=ReorderStats)


class PeelingSequence:
    """Removal order, peeling weights, and prefix densities of one peel.

    ``order[k]`` is the vertex removed at step k; ``delta[k]`` the decrease
    in f at that step; ``pos`` the inverse permutation; ``f0`` the total
    suspiciousness of the full graph the sequence was computed on.  Prefix
    densities and the densest prefix are recomputed by an O(|V|) scan on
    demand (detections are rare relative to updates).
    """

    def __init__(self, order=None, delta=None, f0=0):
        self.order: list[int] = list(order) if order else []
        self.delta: list = list(delta) if delta else []
        self.f0 = f0
        self.pos: dict[int, int] = {v: k for k, v in enumerate(self.order)}

    def __len__(self):
        return len(self.order)

    def rebuild_pos(self, start=0):
        for k in range(start, len(self.order)):
            self.pos[self.order[k]] = k

    def prefix_f(self, i):
        """f(S_i) after the first i removals."""
        return self.f0 - sum(self.delta[:i])

    def density_of_prefix(self, i) -> float:
        """g(S_i) = f(S_i) / (|V| - i); defined as 0 for the empty suffix."""
        n = len(self.order)
        if not 0 <= i <= n:
            raise BadPrefixIndexError(f"prefix index {i} outside [0, {n}]")
        if i == n:
            return 0.0
        return self.prefix_f(i) / (n - i)

    def best_prefix(self):
        """(index, density) of the densest prefix.

        Among prefixes whose density ties with the maximum (within 1e-9
        relative), the smallest index, i.e. the largest community, wins.
        """
        n = len(self.order)
        if n == 0:
            return 0, 0.0
        best_i, best_d = n, 0.0
        remaining = self.f0
        for i in range(n):
            d = remaining / (n - i)
            # strict improvement beyond tolerance; earlier index wins ties
            if d > best_d + _DENSITY_TOL * max(1.0, abs(best_d)):
                best_i, best_d = i, d
            remaining -= self.delta[i]
        if best_i == n:
            best_i, best_d = 0, self.density_of_prefix(0)
        return best_i, best_d

    def detection(self, stats=None) -> DetectionResult:
        i, d = self.best_prefix()
        return DetectionResult(
            community=frozenset(self.order[i:]),
            density=float(d),
            prefix_index=i,
            stats=stats or ReorderStats(),
        )


def peeling_weight(graph: DynamicGraph, u, member) -> float:
    """w_u(S): decrease in f when u leaves the set defined by ``member``."""
    w = graph.vertex_weight(u)
    for v, c in graph.out_edges(u).items():
        if member(v):
            w += c
    for v, c in graph.in_edges(u).items():
        if member(v):
            w += c
    return w


def peel(graph: DynamicGraph):
    """Full peeling of ``graph``: (PeelingSequence, DetectionResult).

    O(|E| log |V|); heap pushes are bounded by |V| + |E|.
    """
    n = graph.num_vertices
    seq = PeelingSequence(f0=graph.total_suspiciousness)
    stats = ReorderStats()
    if n == 0:
        return seq, DetectionResult(frozenset(), 0.0, 0, stats)

    weight = [graph.incident_weight(u) for u in graph.vertices()]
    alive = [True] * n
    heap = [(weight[u], u) for u in graph.vertices()]
    heapq.heapify(heap)
    stats.heap_ops = n

    order = []
    delta = []
    while heap:
        w, u = heapq.heappop(heap)
        if not alive[u] or w != weight[u]:
            continue
        alive[u] = False
        order.append(u)
        delta.append(w)
        for v in graph.neighbors(u):
            stats.touched_edges += 1
            if alive[v]:
                weight[v] -= graph.combined_weight(u, v)
                heapq.heappush(heap, (weight[v], v))
                stats.heap_ops += 1

    seq.order = order
    seq.delta = delta
    seq.rebuild_pos()
    stats.touched_vertices = n
    return seq, seq.detection(stats)
