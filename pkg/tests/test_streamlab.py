import random

import pytest

from spade.errors import EmptyWindowError, NoLabeledEventsError, TimestampOrderError
from spade.streamlab import (
    StreamEvent,
    UpdateStream,
    detect_window,
    enumerate_dense,
    make_engine,
    prevention_ratio,
    replay,
)

from conftest import build_graph


def random_stream(seed, n_vertices=15, n_events=120, fraud_rate=0.15):
    rng = random.Random(seed)
    events = []
    for i in range(n_events):
        u, v = rng.sample(range(n_vertices), 2)
        events.append(StreamEvent(f"v{u}", f"v{v}", rng.randint(1, 6), i,
                                  rng.random() < fraud_rate))
    return UpdateStream(events)


def detections_key(report):
    return [(labels, round(d, 9)) for _t, labels, d in report.detections]


# --- UpdateStream ------------------------------------------------------------

def test_monotone_timestamps_enforced():
    ev = [StreamEvent("a", "b", 1, 5), StreamEvent("b", "c", 1, 3)]
    with pytest.raises(TimestampOrderError):
        UpdateStream(ev)
    assert len(UpdateStream(ev, require_monotone=False)) == 2


# --- prevention ratio ---------------------------------------------------------

def test_prevention_ratio_hand_counts():
    st = UpdateStream([StreamEvent("a", "b", 1, t, True) for t in range(1, 7)])
    assert prevention_ratio(st, 3.5) == 0.5  # events at 4,5,6 prevented
    assert prevention_ratio(st, 0) == 1.0
    assert prevention_ratio(st, 10) == 0.0


def test_prevention_ratio_requires_labels():
    st = UpdateStream([StreamEvent("a", "b", 1, 1, False)])
    with pytest.raises(NoLabeledEventsError):
        prevention_ratio(st, 0)
    labeled = UpdateStream([StreamEvent("a", "b", 1, 1, True)])
    with pytest.raises(NoLabeledEventsError):
        prevention_ratio(labeled, 0, fraudsters={"zz"})


def test_prevention_ratio_fraudster_filter():
    st = UpdateStream([StreamEvent("a", "b", 1, 1, True),
                       StreamEvent("c", "d", 1, 5, True)])
    assert prevention_ratio(st, 2, fraudsters={"c"}) == 1.0
    assert prevention_ratio(st, 2, fraudsters={"a"}) == 0.0


# --- replay --------------------------------------------------------------------

def test_replay_latency_is_eq4_sum():
    # three labeled events at tau = 1, 2, 3 covered by one flush
    st = UpdateStream([StreamEvent("a", "b", 1, t, True) for t in (1, 2, 3)])
    rep = replay(st, mode="batch", batch_size=3, init_fraction=0.0)
    assert len(rep.detections) == 1
    tau_r = rep.detections[0][0]
    assert rep.latency_total == pytest.approx((tau_r - 1) + (tau_r - 2) + (tau_r - 3))
    assert rep.latency_total == pytest.approx(
        rep.queueing_total + rep.compute_total)


def test_replay_single_event_inc():
    st = UpdateStream([StreamEvent("a", "b", 2, 7, True)])
    rep = replay(st, mode="inc", init_fraction=0.0)
    assert rep.events == 1 and rep.initial_events == 0
    assert len(rep.detections) == 1
    assert rep.detections[0][1] == ["a", "b"]
    assert rep.detections[0][2] == pytest.approx(1.0)  # weight 2 over 2 vertices


def test_inc_equals_batch_one_detection_log():
    st = random_stream(7)
    inc = replay(st, mode="inc", init_fraction=0.5)
    b1 = replay(st, mode="batch", batch_size=1, init_fraction=0.5)
    assert detections_key(inc) == detections_key(b1)


@pytest.mark.parametrize("mode,kw", [
    ("static", {"batch_size": 9}),
    ("inc", {}),
    ("batch", {"batch_size": 9}),
    ("group", {}),
])
def test_final_detection_matches_static_peel(mode, kw):
    st = random_stream(13)
    rep = replay(st, mode=mode, init_fraction=0.6, **kw)
    eng = make_engine("dw")
    eng.bootstrap((ev.src, ev.dst, ev.weight) for ev in st)
    det = eng.detect()
    assert rep.detections[-1][1] == eng.community_labels(det)
    assert rep.detections[-1][2] == pytest.approx(det.density)


def test_replay_rejects_unknown_mode_and_fraction():
    st = random_stream(1, n_events=5)
    with pytest.raises(ValueError):
        replay(st, mode="turbo")
    with pytest.raises(ValueError):
        replay(st, init_fraction=1.5)


# --- enumeration ------------------------------------------------------------------

def test_enumerate_triangle_plus_edge():
    g = build_graph([(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1)])
    found = enumerate_dense(g, 2)
    assert [(sorted(c), d) for c, d in found] == [
        ([0, 1, 2], pytest.approx(1.0)),
        ([3, 4], pytest.approx(0.5)),
    ]


def test_enumerate_empty_graph():
    from spade.graph import DynamicGraph
    assert enumerate_dense(DynamicGraph(), 3) == []


def test_enumerate_tied_triangles_merge():
    g = build_graph([(0, 1, 1), (1, 2, 1), (2, 0, 1),
                     (3, 4, 1), (4, 5, 1), (5, 3, 1)])
    found = enumerate_dense(g, 1)
    assert len(found) == 1
    assert found[0][0] == frozenset(range(6))


def test_enumerate_disjoint_and_nonincreasing():
    g = build_graph([(i, j, (i + j) % 5 + 1)
                     for i in range(10) for j in range(10) if i < j])
    found = enumerate_dense(g, 4)
    seen = set()
    last = float("inf")
    for comm, d in found:
        assert not (comm & seen)
        seen |= comm
        assert d <= last + 1e-9
        last = d


# --- windows ------------------------------------------------------------------------

def window_oracle(stream, lo, hi, metric="dw"):
    eng = make_engine(metric)
    eng.bootstrap((ev.src, ev.dst, ev.weight) for ev in stream
                  if lo <= ev.ts < hi)
    return eng.detect(), eng


def test_window_empty_target_rejected():
    st = random_stream(3)
    with pytest.raises(EmptyWindowError):
        detect_window(st, (0, 50), (60, 60))


def test_window_identical_returns_baseline():
    st = random_stream(5)
    det, eng = detect_window(st, (0, 60), (0, 60))
    odet, oeng = window_oracle(st, 0, 60)
    assert eng.community_labels(det) == oeng.community_labels(odet)
    assert det.density == pytest.approx(odet.density)


@pytest.mark.parametrize("baseline,target", [
    ((0, 60), (70, 120)),    # disjoint
    ((0, 80), (40, 120)),    # slide forward
    ((20, 100), (0, 120)),   # target contains baseline
    ((0, 120), (30, 90)),    # baseline contains target
    ((40, 120), (0, 80)),    # slide backward
])
def test_window_cases_match_static_peel(baseline, target):
    st = random_stream(11, n_events=120)
    det, eng = detect_window(st, baseline, target)
    odet, oeng = window_oracle(st, *target)
    assert det.density == pytest.approx(odet.density, abs=1e-9)
    assert eng.community_labels(det) == oeng.community_labels(odet)


def test_window_fd_rebuilds_when_deletions_needed():
    st = random_stream(17, n_events=100)
    det, eng = detect_window(st, (0, 80), (40, 100), metric="fd")
    odet, oeng = window_oracle(st, 40, 100, metric="fd")
    assert det.density == pytest.approx(odet.density)
    assert eng.community_labels(det) == oeng.community_labels(odet)
