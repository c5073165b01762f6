"""Mutable directed weighted graph with dense vertex indexing.

Vertices are interned: external string labels map to dense integer ids that
stay stable for the lifetime of the graph, so peeling state can live in
plain lists indexed by id.  Each vertex carries a nonnegative suspiciousness
weight ``a``; each edge a strictly positive suspiciousness weight ``c``.
Parallel insertions of the same (src, dst) pair merge by summing weights.

The graph maintains three running aggregates that the engine reads on every
event: the total suspiciousness f(V), the per-vertex incident weight
a_u + sum of in/out edge weights (the peeling weight against the full vertex
set), and the edge count.  Integer weights are kept as ints so that
incremental-vs-static comparisons are exact.

Single-writer: mutation is not thread-safe.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DuplicateVertexError,
    EdgeNotFoundError,
    NegativeVertexWeightError,
    NonPositiveWeightError,
    SelfLoopError,
    UnknownVertexError,
    WeightUnderflowError,
)

# below this residual weight an edge is dropped entirely
_EPS_REMOVE = 1e-12
_EPS_REL = 1e-9


@dataclass(frozen=True)
class EdgeEvent:
    """One edge-level update: insert or delete (src, dst, weight)."""

    src: int
    dst: int
    weight: float
    kind: str = "insert"  # "insert" | "delete"


@dataclass
class GraphDelta:
    """A set of edge events, applied together by the batch reorder."""

    events: list[EdgeEvent] = field(default_factory=list)

    def add_insert(self, src, dst, weight):
        if weight <= 0:
            raise NonPositiveWeightError(f"insert weight must be > 0, got {weight}")
        self.events.append(EdgeEvent(src, dst, weight, "insert"))

    def add_delete(self, src, dst, weight):
        self.events.append(EdgeEvent(src, dst, weight, "delete"))

    def endpoints(self):
        seen = set()
        for ev in self.events:
            seen.add(ev.src)
            seen.add(ev.dst)
        return seen

    def __len__(self):
        return len(self.events)


class DynamicGraph:
    """Directed weighted multigraph-with-merge backed by adjacency dicts."""

    def __init__(self):
        self._labels: dict[str, int] = {}
        self._names: list[str] = []
        self._out: list[dict[int, float]] = []
        self._in: list[dict[int, float]] = []
        self._a: list[float] = []
        self._incident: list[float] = []  # a_u + sum of in/out weights
        self._num_edges = 0
        self._f_total = 0

    # ---- vertices ----------------------------------------------------------

    def add_vertex(self, label: str, a=0) -> int:
        if label in self._labels:
            raise DuplicateVertexError(f"vertex {label!r} already exists")
        if a < 0:
            raise NegativeVertexWeightError(f"vertex weight must be >= 0, got {a}")
        vid = len(self._names)
        self._labels[label] = vid
        self._names.append(label)
        self._out.append({})
        self._in.append({})
        self._a.append(a)
        self._incident.append(a)
        self._f_total += a
        return vid

    def ensure_vertex(self, label: str, a=0) -> int:
        vid = self._labels.get(label)
        if vid is None:
            vid = self.add_vertex(label, a)
        return vid

    def has_vertex(self, label: str) -> bool:
        return label in self._labels

    def vertex_id(self, label: str) -> int:
        try:
            return self._labels[label]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {label!r}") from None

    def label(self, vid: int) -> str:
        return self._names[vid]

    def vertex_weight(self, vid: int):
        return self._a[vid]

    def vertices(self):
        return range(len(self._names))

    # ---- edges -------------------------------------------------------------

    def _check_vid(self, vid):
        if not 0 <= vid < len(self._names):
            raise UnknownVertexError(f"unknown vertex id {vid}")

    def add_edge(self, src: int, dst: int, c) -> bool:
        """Insert (src, dst, c); merges into an existing edge. Returns merged."""
        self._check_vid(src)
        self._check_vid(dst)
        if src == dst:
            raise SelfLoopError(f"self-loop on {self._names[src]!r} rejected")
        if c <= 0:
            raise NonPositiveWeightError(f"edge weight must be > 0, got {c}")
        merged = dst in self._out[src]
        if merged:
            self._out[src][dst] += c
            self._in[dst][src] += c
        else:
            self._out[src][dst] = c
            self._in[dst][src] = c
            self._num_edges += 1
        self._incident[src] += c
        self._incident[dst] += c
        self._f_total += c
        return merged

    def delete_edge(self, src: int, dst: int, c) -> bool:
        """Decrease (src, dst) by c; drop the edge if (nearly) zero remains.

        Returns True when the edge was removed entirely.
        """
        self._check_vid(src)
        self._check_vid(dst)
        if c <= 0:
            raise NonPositiveWeightError(f"delete amount must be > 0, got {c}")
        w = self._out[src].get(dst)
        if w is None:
            raise EdgeNotFoundError(
                f"no edge {self._names[src]!r} -> {self._names[dst]!r}")
        if c > w and (c - w) > _EPS_REL * max(1.0, abs(w)):
            raise WeightUnderflowError(
                f"delete {c} exceeds stored weight {w} on "
                f"{self._names[src]!r} -> {self._names[dst]!r}")
        remaining = w - c
        removed = remaining <= _EPS_REMOVE
        if removed:
            del self._out[src][dst]
            del self._in[dst][src]
            self._num_edges -= 1
            c = w  # absorb float residue so aggregates stay consistent
        else:
            self._out[src][dst] = remaining
            self._in[dst][src] = remaining
        self._incident[src] -= c
        self._incident[dst] -= c
        self._f_total -= c
        return removed

    def edge_weight(self, src: int, dst: int):
        return self._out[src].get(dst, 0)

    def has_edge(self, src: int, dst: int) -> bool:
        return dst in self._out[src]

    def combined_weight(self, u: int, v: int):
        """c_uv + c_vu: total weight between u and v in both directions."""
        self._check_vid(u)
        self._check_vid(v)
        return self._out[u].get(v, 0) + self._in[u].get(v, 0)

    def out_edges(self, u: int):
        return self._out[u]

    def in_edges(self, u: int):
        return self._in[u]

    def neighbors(self, u: int):
        """Distinct neighbors of u across both directions."""
        if len(self._out[u]) <= len(self._in[u]):
            small, large = self._out[u], self._in[u]
        else:
            small, large = self._in[u], self._out[u]
        yield from large
        for v in small:
            if v not in large:
                yield v

    def degree(self, u: int) -> int:
        return len(self._out[u]) + len(self._in[u])

    def in_degree(self, u: int) -> int:
        return len(self._in[u])

    def incident_weight(self, u: int):
        """a_u + sum of all incident edge weights, i.e. w_u(V). O(1)."""
        return self._incident[u]

    # ---- aggregates --------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self._names)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    @property
    def total_suspiciousness(self):
        """Maintained f(V) = sum a_i + sum c_ij."""
        return self._f_total

    def recompute_total(self):
        """Full-scan f(V); used by invariant checks against the running sum."""
        return sum(self._a) + sum(w for adj in self._out for w in adj.values())

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph()
        g._labels = dict(self._labels)
        g._names = list(self._names)
        g._out = [dict(d) for d in self._out]
        g._in = [dict(d) for d in self._in]
        g._a = list(self._a)
        g._incident = list(self._incident)
        g._num_edges = self._num_edges
        g._f_total = self._f_total
        return g

    def __repr__(self):
        return (f"DynamicGraph(|V|={self.num_vertices}, |E|={self.num_edges}, "
                f"f={self._f_total})")
