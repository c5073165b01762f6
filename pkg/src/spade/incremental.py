"""Incremental maintenance of a peeling sequence.

Instead of re-peeling after every update, the sequence is repaired locally:
positions before the earlier endpoint of the changed edge are provably
unchanged, and a pending min-queue merges the affected vertices back into
the untouched suffix.  At every step the emitted vertex is the minimum of
the working set under the global (weight, id) tie-break, so the repaired
sequence equals a from-scratch peel of the updated graph -- exactly, for
integer weights.

Three entry points:

* ``insert_edge_reorder``  -- one edge; the merge re-evaluates a suffix
  vertex only when it is adjacent to a queued vertex.
* ``insert_batch_reorder`` -- many edges at once; endpoints are colored
  black, their not-yet-emitted neighbors gray, and gray/black vertices are
  re-evaluated when the merge reaches them.
* ``delete_edge_reorder``  -- one removed edge; a backward scan first pulls
  back the prefix vertices that the lightened endpoint may now overtake,
  then the forward merge runs as for insertion.

The merge rewrites only positions [start, k) where k is where the pending
queue drained; everything past k keeps its position, so an update touching
a small neighborhood costs far less than the sequence length.

Membership in the working set (the vertices not yet re-emitted) is decided
positionally: v is still working iff its old position is at or past the
merge cursor, or it currently sits in the pending queue.  Peeling weights
of re-queued vertices are recovered by a direct adjacency scan of the
updated graph against that working set, which is O(deg) and immune to
float drift.
"""
from __future__ import annotations

import heapq
import time

from .errors import (
    DeletionNotAppliedError,
    DuplicateVertexError,
    UnknownVertexError,
    WrongDeltaKindError,
)
from .graph import DynamicGraph, GraphDelta
from .peeling import PeelingSequence, ReorderStats


class PendingQueue:
    """Min-priority queue over (weight, vertex id) with key updates.

    Lazy invalidation: the authoritative weight lives in ``weights``; heap
    entries that disagree are skipped.  A vertex appears at most once as a
    member (but may have several stale heap entries).
    """

    def __init__(self):
        self._heap = []
        self.weights = {}
        self.pushes = 0

    def __len__(self):
        return len(self.weights)

    def __contains__(self, v):
        return v in self.weights

    def add(self, v, w):
        self.weights[v] = w
        heapq.heappush(self._heap, (w, v))
        self.pushes += 1

    def adjust(self, v, dw):
        self.add(v, self.weights[v] + dw)

    def _settle(self):
        while True:
            w, v = self._heap[0]
            if self.weights.get(v) == w:
                return w, v
            heapq.heappop(self._heap)

    def min_key(self):
        """(weight, id) of the head, under the tie-break order."""
        return self._settle()

    def pop(self):
        w, v = self._settle()
        heapq.heappop(self._heap)
        del self.weights[v]
        return w, v


def insert_vertex_seq(seq: PeelingSequence, v, a=0):
    """Prepend a brand-new vertex with peeling weight a (0 unless the model
    assigns prior vertex suspiciousness)."""
    if v in seq.pos:
        raise DuplicateVertexError(f"vertex id {v} already in sequence")
    seq.order.insert(0, v)
    seq.delta.insert(0, a)
    seq.f0 += a
    seq.rebuild_pos()


def recover_weight(graph: DynamicGraph, u, in_working) -> float:
    """w_u(W) for the working set W given by the ``in_working`` predicate,
    computed by a direct adjacency scan of the updated graph."""
    w = graph.vertex_weight(u)
    for v, c in graph.out_edges(u).items():
        if in_working(v):
            w += c
    for v, c in graph.in_edges(u).items():
        if in_working(v):
            w += c
    return w


def _splice(seq, graph, start, k, new_order, new_delta):
    """Replace positions [start, k); everything past k is untouched."""
    seq.order[start:k] = new_order
    seq.delta[start:k] = new_delta
    seq.f0 = graph.total_suspiciousness
    pos = seq.pos
    for idx in range(start, k):
        pos[seq.order[idx]] = idx


def _recover(graph, u, in_working, stats):
    stats.touched_edges += graph.degree(u)
    return recover_weight(graph, u, in_working)


def _pop_and_relax(graph, queue, stale, new_order, new_delta, stats):
    """Case 1: emit the queue head and relax its queued neighbors."""
    w, u = queue.pop()
    new_order.append(u)
    new_delta.append(w)
    for v in graph.neighbors(u):
        stats.touched_edges += 1
        if v in queue:
            queue.adjust(v, -graph.combined_weight(u, v))
        stale[v] -= 1


def _enqueue_tracked(graph, queue, stale, u, w, stats):
    """Add a new queue member and mark its neighbors' stored weights stale.

    A suffix vertex's stored delta is wrong exactly when it is adjacent to a
    current queue member (queue members moved from positions the stored
    delta assumed peeled), so a per-vertex counter of adjacent members gives
    the Case 2 test in O(1)."""
    queue.add(u, w)
    stats.touched_vertices += 1
    for v in graph.neighbors(u):
        stats.touched_edges += 1
        stale[v] = stale.get(v, 0) + 1


def insert_edge_reorder(seq: PeelingSequence, graph: DynamicGraph,
                        src, dst, c) -> ReorderStats:
    """Repair ``seq`` after the single edge (src, dst, c) was inserted into
    ``graph``.  Mutates seq in place; returns the affected-area stats."""
    t0 = time.perf_counter()
    if src not in seq.pos or dst not in seq.pos:
        raise UnknownVertexError("edge endpoints must already be in the sequence")
    stats = ReorderStats()
    old_order, old_delta = seq.order, seq.delta
    pos = seq.pos
    n = len(old_order)
    i = min(pos[src], pos[dst])
    first = old_order[i]

    queue = PendingQueue()
    stale = {}
    cursor = [i + 1]

    def in_working(v):
        return pos[v] >= cursor[0] or v in queue

    _enqueue_tracked(graph, queue, stale, first,
                     _recover(graph, first, in_working, stats), stats)

    new_order, new_delta = [], []
    while queue:
        k = cursor[0]
        if k >= n:
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
            continue
        uk = old_order[k]
        if queue.min_key() < (old_delta[k], uk):
            # Case 1: the queue head is the working-set minimum
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
        else:
            cursor[0] = k + 1
            if stale.get(uk, 0):
                # Case 2: u_k's stored weight is stale; re-queue it
                _enqueue_tracked(graph, queue, stale, uk,
                                 _recover(graph, uk, in_working, stats), stats)
            else:
                # Case 3: stored weight still exact; emit directly
                new_order.append(uk)
                new_delta.append(old_delta[k])

    _splice(seq, graph, i, cursor[0], new_order, new_delta)
    stats.heap_ops = queue.pushes
    stats.elapsed = time.perf_counter() - t0
    return stats


def insert_batch_reorder(seq: PeelingSequence, graph: DynamicGraph,
                         delta: GraphDelta) -> ReorderStats:
    """Repair ``seq`` after all insertions in ``delta`` were applied to
    ``graph``.  Endpoints (including new vertices, which must already be
    prepended to seq) are processed in ascending sequence position."""
    t0 = time.perf_counter()
    if any(ev.kind != "insert" for ev in delta.events):
        raise WrongDeltaKindError("batch reorder accepts insertions only")
    stats = ReorderStats()
    if not delta.events:
        stats.elapsed = time.perf_counter() - t0
        return stats
    for v in delta.endpoints():
        if v not in seq.pos:
            raise UnknownVertexError(f"vertex id {v} missing from sequence")

    old_order, old_delta = seq.order, seq.delta
    pos = seq.pos
    n = len(old_order)
    black = sorted(delta.endpoints(), key=lambda v: pos[v])
    blackset = set(black)

    start = pos[black[0]]
    queue = PendingQueue()
    stale = {}
    cursor = [start]

    def in_working(v):
        return pos[v] >= cursor[0] or v in queue

    def enqueue(u):
        _enqueue_tracked(graph, queue, stale, u,
                         _recover(graph, u, in_working, stats), stats)

    new_order, new_delta = [], []
    bi = 0  # cursor into the black list
    while bi < len(black) or queue:
        if not queue:
            # skip blacks already swept into the queue by the merge
            while bi < len(black) and (pos[black[bi]] < cursor[0]
                                       or black[bi] in queue):
                bi += 1
            if bi == len(black):
                break
            p = pos[black[bi]]
            # untouched stretch between the previous merge and the next black
            for idx in range(cursor[0], p):
                new_order.append(old_order[idx])
                new_delta.append(old_delta[idx])
            cursor[0] = p + 1
            enqueue(black[bi])
            bi += 1
            continue
        k = cursor[0]
        if k >= n:
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
            continue
        uk = old_order[k]
        if uk in queue:
            cursor[0] = k + 1
            continue
        if queue.min_key() < (old_delta[k], uk):
            # Case 1
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
        else:
            cursor[0] = k + 1
            if uk in blackset or stale.get(uk, 0):
                # Case 2(a): black or queue-adjacent vertices are re-queued
                # with a recovered weight
                enqueue(uk)
            else:
                # Case 2(b): untouched vertices are emitted verbatim
                new_order.append(uk)
                new_delta.append(old_delta[k])

    _splice(seq, graph, start, cursor[0], new_order, new_delta)
    stats.heap_ops = queue.pushes
    stats.elapsed = time.perf_counter() - t0
    return stats


def delete_edge_reorder(seq: PeelingSequence, graph: DynamicGraph,
                        src, dst) -> ReorderStats:
    """Repair ``seq`` after the edge (src, dst) was removed from ``graph``."""
    if graph.has_edge(src, dst):
        raise DeletionNotAppliedError(
            "edge still present in the graph; apply the deletion first")
    return reorder_after_decrease(seq, graph, src, dst)


def reorder_after_decrease(seq: PeelingSequence, graph: DynamicGraph,
                           src, dst) -> ReorderStats:
    """Shared repair path for full removals and partial weight decreases."""
    t0 = time.perf_counter()
    if src not in seq.pos or dst not in seq.pos:
        raise UnknownVertexError("edge endpoints must already be in the sequence")
    stats = ReorderStats()
    old_order, old_delta = seq.order, seq.delta
    pos = seq.pos
    n = len(old_order)
    i = min(pos[src], pos[dst])
    j_end = src if pos[src] > i else dst  # later-positioned endpoint
    first = old_order[i]

    queue = PendingQueue()
    stale = {}
    cursor = [i + 1]

    def in_working(v):
        return pos[v] >= cursor[0] or v in queue

    _enqueue_tracked(graph, queue, stale, first,
                     _recover(graph, first, in_working, stats), stats)
    # The later endpoint also lost weight and may overtake prefix vertices;
    # its weight over the current tail lower-bounds its weight over any
    # earlier set, so it caps the backward scan alongside the queue minimum.
    j_key = (_recover(graph, j_end, in_working, stats), j_end)

    # Backward scan: prefix vertices that a lightened endpoint may now
    # overtake rejoin the working set.  w_u(S_0) upper-bounds the working
    # weight, so stopping once it drops to the threshold is safe.
    start = i
    while start > 0:
        uk = old_order[start - 1]
        w_full = graph.incident_weight(uk)
        stats.touched_edges += graph.degree(uk)
        if (w_full, uk) <= min(queue.min_key(), j_key):
            break
        start -= 1
        # uk rejoins the working set: queued neighbors regain its edges
        for v in graph.neighbors(uk):
            stats.touched_edges += 1
            if v in queue:
                queue.adjust(v, graph.combined_weight(uk, v))
        _enqueue_tracked(graph, queue, stale, uk,
                         _recover(graph, uk, in_working, stats), stats)

    # Forward merge, identical to single-edge insertion.
    new_order, new_delta = [], []
    while queue:
        k = cursor[0]
        if k >= n:
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
            continue
        uk = old_order[k]
        if queue.min_key() < (old_delta[k], uk):
            _pop_and_relax(graph, queue, stale, new_order, new_delta, stats)
        else:
            cursor[0] = k + 1
            if stale.get(uk, 0):
                _enqueue_tracked(graph, queue, stale, uk,
                                 _recover(graph, uk, in_working, stats), stats)
            else:
                new_order.append(uk)
                new_delta.append(old_delta[k])

    _splice(seq, graph, start, cursor[0], new_order, new_delta)
    stats.heap_ops = queue.pushes
    stats.elapsed = time.perf_counter() - t0
    return stats
