"""Timestamped replay, latency/prevention metrics, enumeration, windows.

``replay`` feeds a labeled edge stream into an engine under one of four
update disciplines (full re-peel, per-edge incremental, fixed-size batch,
benign/urgent grouping) and reports the response time of every event.
Time is simulated: an event's response timestamp is the timestamp of the
event that triggered its reorder plus the measured compute time of that
reorder in microseconds, so queueing time and compute time add up to the
reported latency by construction.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .engine import FlushPolicy, SpadeEngine
from .errors import (
    EmptyWindowError,
    NoLabeledEventsError,
    TimestampOrderError,
)
from .graph import DynamicGraph
from .models import FdParams, SuspiciousnessModel
from .peeling import DetectionResult, peel


@dataclass(frozen=True)
class StreamEvent:
    src: str
    dst: str
    weight: float = 1.0
    ts: int = 0
    label: bool = False


class UpdateStream:
    """Ordered, optionally timestamp-monotone edge events."""

    def __init__(self, events, require_monotone=True):
        self.events: list[StreamEvent] = list(events)
        self.require_monotone = require_monotone
        if require_monotone:
            prev = None
            for k, ev in enumerate(self.events):
                if prev is not None and ev.ts < prev:
                    raise TimestampOrderError(
                        f"event {k} timestamp {ev.ts} precedes {prev}")
                prev = ev.ts

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


@dataclass
class ReplayReport:
    """Outcome of one replay: per-event responses, latency sums over the
    labeled fraud events, prevention ratio, and the detection log."""

    mode: str
    metric: str
    events: int = 0
    initial_events: int = 0
    responses: list = field(default_factory=list)  # (ts, tau_s, tau_r, label)
    detections: list = field(default_factory=list)  # (tau_r, labels, density)
    latency_total: float = 0.0
    latency_mean: float = 0.0
    queueing_total: float = 0.0
    compute_total: float = 0.0
    prevention_ratio: float | None = None
    touched_vertices: int = 0
    touched_edges: int = 0

    def to_dict(self):
        return {
            "mode": self.mode,
            "metric": self.metric,
            "events": self.events,
            "initial_events": self.initial_events,
            "latency_total": self.latency_total,
            "latency_mean": self.latency_mean,
            "queueing_total": self.queueing_total,
            "compute_total": self.compute_total,
            "prevention_ratio": self.prevention_ratio,
            "touched_vertices": self.touched_vertices,
            "touched_edges": self.touched_edges,
            "detections": [
                {"tau_r": t, "community": labels, "density": d}
                for t, labels, d in self.detections
            ],
            "responses": [
                {"ts": ts, "tau_s": ts_s, "tau_r": ts_r, "label": int(lab)}
                for ts, ts_s, ts_r, lab in self.responses
            ],
        }


def _make_model(metric, fd_c=5.0):
    params = FdParams(fd_c) if metric == "fd" else None
    return SuspiciousnessModel(metric, params)


def make_engine(metric="dw", fd_c=5.0, flush_policy=None,
                vertex_priors=None) -> SpadeEngine:
    return SpadeEngine(_make_model(metric, fd_c), flush_policy, vertex_priors)


def prevention_ratio(stream: UpdateStream, tau_f, fraudsters=None) -> float:
    """Share of labeled fraud events arriving strictly after detection at
    tau_f; optionally restricted to events touching ``fraudsters``."""
    labeled = [ev for ev in stream
               if ev.label and (fraudsters is None
                                or ev.src in fraudsters or ev.dst in fraudsters)]
    if not labeled:
        raise NoLabeledEventsError("no labeled fraud events for this fraudster set")
    prevented = sum(1 for ev in labeled if ev.ts > tau_f)
    return prevented / len(labeled)


def replay(stream: UpdateStream, mode="inc", metric="dw", fd_c=5.0,
           init_fraction=0.9, batch_size=10, flush_policy=None,
           vertex_priors=None) -> ReplayReport:
    """Replay ``stream`` under one update discipline.

    mode: "static" (full re-peel every batch_size events), "inc" (per-edge
    reorder), "batch" (batch reorder every batch_size events), or "group"
    (benign buffering, urgent flush).  The first ``init_fraction`` of the
    events forms the initial graph via one static peel.
    """
    if mode not in ("static", "inc", "batch", "group"):
        raise ValueError(f"unknown replay mode {mode!r}")
    if not 0 <= init_fraction <= 1:
        raise ValueError("init_fraction must lie in [0, 1]")

    engine = make_engine(metric, fd_c, flush_policy, vertex_priors)
    events = stream.events
    n_init = int(len(events) * init_fraction)
    engine.bootstrap((ev.src, ev.dst, ev.weight) for ev in events[:n_init])

    report = ReplayReport(mode=mode, metric=metric, events=len(events),
                          initial_events=n_init)
    live = events[n_init:]
    pending = []  # events covered by the next reorder

    def record(detection, tau_s, compute_us):
        tau_r = tau_s + compute_us
        for ev in pending:
            report.responses.append((ev.ts, tau_s, tau_r, ev.label))
            if ev.label:
                report.latency_total += tau_r - ev.ts
                report.queueing_total += tau_s - ev.ts
                report.compute_total += compute_us
        report.detections.append(
            (tau_r, engine.community_labels(detection), detection.density))
        report.touched_vertices += detection.stats.touched_vertices
        report.touched_edges += detection.stats.touched_edges
        pending.clear()

    if mode == "group":
        for ev in live:
            pending.append(ev)
            t0 = time.perf_counter()
            det = engine.submit_edge(ev.src, ev.dst, ev.weight, ev.ts)
            if det is not None:
                record(det, ev.ts, (time.perf_counter() - t0) * 1e6)
        if pending:
            tau_s = live[-1].ts
            t0 = time.perf_counter()
            det = engine.flush()
            record(det, tau_s, (time.perf_counter() - t0) * 1e6)
    else:
        window = 1 if mode == "inc" else max(1, batch_size)
        for ev in live:
            pending.append(ev)
            if len(pending) < window and ev is not live[-1]:
                continue
            tau_s = ev.ts
            t0 = time.perf_counter()
            if mode == "inc":
                det = engine.insert_edge_now(ev.src, ev.dst, ev.weight)
            elif mode == "batch":
                det = engine.insert_batch_now(
                    (p.src, p.dst, p.weight) for p in pending)
            else:  # static: apply edges, then re-peel from scratch
                for p in pending:
                    engine._apply_edge(p.src, p.dst, p.weight)
                engine.seq, det = peel(engine.graph)
                engine._detection = det
            record(det, tau_s, (time.perf_counter() - t0) * 1e6)

    labeled = [r for r in report.responses if r[3]]
    if labeled:
        report.latency_mean = report.latency_total / len(labeled)

    # prevention: first detection whose community touches a labeled event
    fraud_labels = {ev.src for ev in live if ev.label} | {
        ev.dst for ev in live if ev.label}
    tau_detect = None
    for tau_r, labels, _d in report.detections:
        if fraud_labels & set(labels):
            tau_detect = tau_r
            break
    if tau_detect is not None and any(ev.label for ev in stream):
        report.prevention_ratio = prevention_ratio(stream, tau_detect)
    return report


def enumerate_dense(graph: DynamicGraph, k, metric_unused=None):
    """Top-k vertex-disjoint dense communities by repeated residual peeling.

    Returns [(frozenset of vertex ids, density)], densities non-increasing;
    stops early when the residual graph has no positive-density community.
    """
    if k < 1:
        return []
    results = []
    current = graph
    id_map = {v: v for v in graph.vertices()}  # current id -> original id
    while len(results) < k and current.num_vertices > 0:
        _seq, det = peel(current)
        if not det.community or det.density <= 0:
            break
        results.append(
            (frozenset(id_map[v] for v in det.community), det.density))
        # residual graph on the surviving vertices
        survivors = [v for v in current.vertices() if v not in det.community]
        nxt = DynamicGraph()
        nxt_map = {}
        for v in survivors:
            nv = nxt.add_vertex(current.label(v), current.vertex_weight(v))
            nxt_map[nv] = id_map[v]
        for v in survivors:
            for w, c in current.out_edges(v).items():
                if w not in det.community:
                    nxt.add_edge(nxt.vertex_id(current.label(v)),
                                 nxt.vertex_id(current.label(w)), c)
        current, id_map = nxt, nxt_map
    return results


def detect_window(stream: UpdateStream, baseline, target, metric="dw",
                  fd_c=5.0):
    """Detection over the target time window, reusing the baseline window's
    peeling state where the windows overlap.

    Windows are half-open [start, end).  Disjoint windows re-peel from
    scratch; overlapping windows compose batch insertions of the edges the
    target adds and per-edge deletions of the edges it drops.  fd freezes
    edge scores at insertion time, so fd windows that would need deletions
    are rebuilt from scratch to stay window-content deterministic.

    Returns (DetectionResult, SpadeEngine for the target window).
    """
    s, e = baseline
    s2, e2 = target
    if s2 >= e2:
        raise EmptyWindowError(f"target window [{s2}, {e2}) is empty")

    def in_window(ev, lo, hi):
        return lo <= ev.ts < hi

    def fresh(lo, hi):
        eng = make_engine(metric, fd_c)
        eng.bootstrap((ev.src, ev.dst, ev.weight) for ev in stream
                      if in_window(ev, lo, hi))
        return eng.detect(), eng

    overlap = max(s, s2) < min(e, e2)
    deletes = [ev for ev in stream
               if in_window(ev, s, min(s2, e)) or in_window(ev, max(e2, s), e)]
    if not overlap or (deletes and metric == "fd"):
        return fresh(s2, e2)

    engine = make_engine(metric, fd_c)
    engine.bootstrap((ev.src, ev.dst, ev.weight) for ev in stream
                     if in_window(ev, s, e))
    if (s2, e2) == (s, e):
        return engine.detect(), engine

    inserts = [ev for ev in stream
               if in_window(ev, s2, min(s, e2)) or in_window(ev, max(e, s2), e2)]
    if inserts:
        engine.insert_batch_now((ev.src, ev.dst, ev.weight) for ev in inserts)
    for ev in deletes:
        c = 1 if metric == "dg" else ev.weight
        engine.delete_edge_now(ev.src, ev.dst, c)
    return engine.detect(), engine
