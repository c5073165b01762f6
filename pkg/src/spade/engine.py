"""Streaming detection engine with benign/urgent edge grouping.

The engine owns the graph, the suspiciousness model, and the live peeling
sequence.  Arriving edges are scored by the model, applied to the graph
immediately, and classified: an edge is *urgent* when it could lift either
endpoint into the current densest community, i.e. when
w_u(S_0) + c >= g(S^P) for either endpoint u (w against the full vertex
set, g from the last completed reorder).  Urgent edges flush the whole
buffer through the batch reorder; benign edges just accumulate, so the
peeling sequence lags the graph by exactly the buffered delta.

An optional size/age policy bounds queueing latency in benign-only
streams; both default to unlimited, which matches the grouping paradigm
exactly (flushes fire only on urgent edges).

Single-writer: submit_edge is the sole ingest entry point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .graph import DynamicGraph, GraphDelta
from .incremental import (
    insert_batch_reorder,
    insert_edge_reorder,
    insert_vertex_seq,
    reorder_after_decrease,
)
from .models import SuspiciousnessModel
from .peeling import DetectionResult, PeelingSequence, peel


class EdgeClass(enum.Enum):
    BENIGN = "benign"
    URGENT = "urgent"


@dataclass
class FlushPolicy:
    """Buffer limits; None means unlimited."""

    max_size: int | None = None
    max_age: float | None = None


class SpadeEngine:
    """Incrementally maintained dense-community detector."""

    def __init__(self, model: SuspiciousnessModel, policy: FlushPolicy | None = None,
                 vertex_priors: dict | None = None):
        self.model = model
        self.policy = policy or FlushPolicy()
        self.graph = DynamicGraph()
        self.seq = PeelingSequence()
        self.vertex_priors = vertex_priors or {}
        self._detection = DetectionResult(frozenset(), 0.0, 0)
        self._buffer = GraphDelta()
        self._buffer_first_ts = None

    # ---- setup -------------------------------------------------------------

    def ensure_vertex(self, label) -> int:
        """Intern a label; new vertices join the head of the sequence."""
        if self.graph.has_vertex(label):
            return self.graph.vertex_id(label)
        a = self.model.vertex_score(label, self.vertex_priors.get(label, 0))
        vid = self.graph.add_vertex(label, a)
        insert_vertex_seq(self.seq, vid, a)
        return vid

    def bootstrap(self, edges) -> DetectionResult:
        """Bulk-load (src_label, dst_label, raw_weight) edges, then peel once.

        Cheaper than incremental insertion for an initial snapshot.
        """
        for src_label, dst_label, raw in edges:
            if src_label == dst_label:
                continue
            self._apply_edge(src_label, dst_label, raw)
        self.seq, self._detection = peel(self.graph)
        return self._detection

    # ---- scoring / classification -------------------------------------------

    def _apply_edge(self, src_label, dst_label, raw):
        """Score and insert one edge; returns (src, dst, c)."""
        src = self.ensure_vertex(src_label)
        dst = self.ensure_vertex(dst_label)
        c = self.model.edge_score(src, dst, raw, self.graph.in_degree(dst))
        self.graph.add_edge(src, dst, c)
        return src, dst, c

    def classify_edge(self, src, dst, c) -> EdgeClass:
        """Urgent iff either endpoint could reach the current community
        density; w(S_0) is the live incident weight before this edge."""
        g = self._detection.density
        if self.graph.incident_weight(src) + c >= g:
            return EdgeClass.URGENT
        if self.graph.incident_weight(dst) + c >= g:
            return EdgeClass.URGENT
        return EdgeClass.BENIGN

    # ---- ingest --------------------------------------------------------------

    def submit_edge(self, src_label, dst_label, raw=1.0, ts=None):
        """Ingest one edge; returns a DetectionResult when a flush fired,
        None while the edge merely joined the buffer."""
        src = self.ensure_vertex(src_label)
        dst = self.ensure_vertex(dst_label)
        c = self.model.edge_score(src, dst, raw, self.graph.in_degree(dst))
        klass = self.classify_edge(src, dst, c)
        self.graph.add_edge(src, dst, c)
        self._buffer.add_insert(src, dst, c)
        if self._buffer_first_ts is None:
            self._buffer_first_ts = ts
        if klass is EdgeClass.URGENT or self._policy_due(ts):
            return self.flush()
        return None

    def _policy_due(self, ts) -> bool:
        if self.policy.max_size is not None and len(self._buffer) >= self.policy.max_size:
            return True
        if (self.policy.max_age is not None and ts is not None
                and self._buffer_first_ts is not None
                and ts - self._buffer_first_ts >= self.policy.max_age):
            return True
        return False

    def flush(self) -> DetectionResult:
        """Reorder over the buffered delta; no-op on an empty buffer."""
        if not self._buffer.events:
            return self._detection
        stats = insert_batch_reorder(self.seq, self.graph, self._buffer)
        self._buffer = GraphDelta()
        self._buffer_first_ts = None
        self._detection = self.seq.detection(stats)
        return self._detection

    @property
    def buffered(self) -> int:
        return len(self._buffer)

    # ---- immediate (ungrouped) updates ----------------------------------------

    def insert_edge_now(self, src_label, dst_label, raw=1.0) -> DetectionResult:
        """Apply and reorder a single edge immediately (no grouping)."""
        self.flush()
        src, dst, c = self._apply_edge(src_label, dst_label, raw)
        stats = insert_edge_reorder(self.seq, self.graph, src, dst, c)
        self._detection = self.seq.detection(stats)
        return self._detection

    def insert_batch_now(self, edges) -> DetectionResult:
        """Apply and reorder a batch of (src_label, dst_label, raw) at once."""
        self.flush()
        delta = GraphDelta()
        for src_label, dst_label, raw in edges:
            src, dst, c = self._apply_edge(src_label, dst_label, raw)
            delta.add_insert(src, dst, c)
        if delta.events:
            stats = insert_batch_reorder(self.seq, self.graph, delta)
            self._detection = self.seq.detection(stats)
        return self._detection

    def delete_edge_now(self, src_label, dst_label, c) -> DetectionResult:
        """Remove weight c from an edge and repair the sequence."""
        self.flush()
        src = self.graph.vertex_id(src_label)
        dst = self.graph.vertex_id(dst_label)
        self.graph.delete_edge(src, dst, c)
        stats = reorder_after_decrease(self.seq, self.graph, src, dst)
        self._detection = self.seq.detection(stats)
        return self._detection

    # ---- queries ----------------------------------------------------------------

    def detect(self) -> DetectionResult:
        """Current detection (state of the last completed reorder)."""
        return self._detection

    def community_labels(self, detection: DetectionResult | None = None):
        det = detection or self._detection
        return sorted(self.graph.label(v) for v in det.community)
