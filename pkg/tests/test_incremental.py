"""The maintained sequence must be indistinguishable from a fresh peel
after every operation -- exactly, not approximately, since integer weights
and the (weight, id) tie-break make the static order unique."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spade.errors import DeletionNotAppliedError, UnknownVertexError, WrongDeltaKindError
from spade.graph import DynamicGraph, GraphDelta
from spade.incremental import (
    delete_edge_reorder,
    insert_batch_reorder,
    insert_edge_reorder,
    insert_vertex_seq,
    reorder_after_decrease,
)
from spade.oracle import gen_random
from spade.peeling import peel

from conftest import assert_matches_static, build_graph, random_case


def _random_new_edge(g, rng):
    n = g.num_vertices
    while True:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            return u, v


# --- single-edge insertion ----------------------------------------------------

def test_insert_into_empty_sequence():
    g = DynamicGraph()
    seq, _ = peel(g)
    u = g.add_vertex("u")
    insert_vertex_seq(seq, u, 0)
    v = g.add_vertex("v")
    insert_vertex_seq(seq, v, 0)
    g.add_edge(u, v, 3)
    insert_edge_reorder(seq, g, u, v, 3)
    assert_matches_static(seq, g)


def test_prefix_before_endpoints_is_preserved():
    g = gen_random(20, 60, 11)
    seq, _ = peel(g)
    u, v = seq.order[15], seq.order[18]
    old_prefix = seq.order[:15]
    g.add_edge(u, v, 4)
    insert_edge_reorder(seq, g, u, v, 4)
    assert seq.order[:15] == old_prefix
    assert_matches_static(seq, g)


@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=80, deadline=None)
def test_insert_matches_static(case):
    g, rng = random_case(case)
    seq, _ = peel(g)
    for _ in range(6):
        u, v = _random_new_edge(g, rng)
        c = rng.randint(1, 10)
        g.add_edge(u, v, c)
        insert_edge_reorder(seq, g, u, v, c)
    assert_matches_static(seq, g)


def test_insert_heavy_edge_promotes_endpoints():
    # a weak pendant pair becomes the densest pair after a heavy edge
    g = build_graph([(0, 1, 5), (1, 2, 5), (3, 4, 1)])
    seq, _ = peel(g)
    g.add_edge(3, 4, 100)
    insert_edge_reorder(seq, g, 3, 4, 100)
    assert_matches_static(seq, g)
    _, det = peel(g)
    assert {3, 4} <= det.community


# --- batch insertion ------------------------------------------------------------

@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=60, deadline=None)
def test_batch_matches_static(case):
    g, rng = random_case(case, max_n=25, max_m=80)
    seq, _ = peel(g)
    delta = GraphDelta()
    for _ in range(rng.randint(1, 12)):
        u, v = _random_new_edge(g, rng)
        c = rng.randint(1, 10)
        g.add_edge(u, v, c)
        delta.add_insert(u, v, c)
    insert_batch_reorder(seq, g, delta)
    assert_matches_static(seq, g)


@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=30, deadline=None)
def test_batch_equals_sequential_singles(case):
    g, rng = random_case(case, max_n=20, max_m=60)
    g2 = g.copy()
    seq, _ = peel(g)
    seq2, _ = peel(g2)
    edges = []
    for _ in range(rng.randint(1, 8)):
        u, v = _random_new_edge(g, rng)
        edges.append((u, v, rng.randint(1, 10)))
    delta = GraphDelta()
    for u, v, c in edges:
        g.add_edge(u, v, c)
        delta.add_insert(u, v, c)
    insert_batch_reorder(seq, g, delta)
    for u, v, c in edges:
        g2.add_edge(u, v, c)
        insert_edge_reorder(seq2, g2, u, v, c)
    assert seq.order == seq2.order
    assert seq.delta == seq2.delta


def test_batch_rejects_deletion_events():
    g = build_graph([(0, 1, 1)])
    seq, _ = peel(g)
    delta = GraphDelta()
    delta.add_delete(0, 1, 1)
    with pytest.raises(WrongDeltaKindError):
        insert_batch_reorder(seq, g, delta)


def test_batch_rejects_unknown_vertices():
    g = build_graph([(0, 1, 1)])
    seq, _ = peel(g)
    delta = GraphDelta()
    delta.add_insert(0, 7, 1)
    with pytest.raises(UnknownVertexError):
        insert_batch_reorder(seq, g, delta)


def test_batch_size_one_equals_single():
    g = gen_random(12, 40, 3)
    g2 = g.copy()
    seq, _ = peel(g)
    seq2, _ = peel(g2)
    g.add_edge(0, 7, 9)
    delta = GraphDelta()
    delta.add_insert(0, 7, 9)
    insert_batch_reorder(seq, g, delta)
    g2.add_edge(0, 7, 9)
    insert_edge_reorder(seq2, g2, 0, 7, 9)
    assert seq.order == seq2.order and seq.delta == seq2.delta


# --- deletion ---------------------------------------------------------------------

def test_delete_requires_graph_already_updated():
    g = build_graph([(0, 1, 2)])
    seq, _ = peel(g)
    with pytest.raises(DeletionNotAppliedError):
        delete_edge_reorder(seq, g, 0, 1)  # edge still present in the graph


@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=80, deadline=None)
def test_delete_matches_static(case):
    rng = random.Random(case)
    n = rng.randint(2, 25)
    g = gen_random(n, rng.randint(1, min(80, n * (n - 1))), case * 3 + 2)
    seq, _ = peel(g)
    edges = [(u, v) for u in g.vertices() for v in g.out_edges(u)]
    for _ in range(4):
        u, v = rng.choice(edges)
        if not g.has_edge(u, v):
            continue
        full = g.out_edges(u)[v]
        amount = full if rng.random() < 0.6 else rng.randint(1, max(1, full - 1))
        amount = min(amount, full)
        g.delete_edge(u, v, amount)
        reorder_after_decrease(seq, g, u, v)
        assert_matches_static(seq, g)


@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=50, deadline=None)
def test_insert_then_delete_roundtrip(case):
    g, rng = random_case(case, max_n=20, max_m=60)
    seq, _ = peel(g)
    before_order, before_delta = list(seq.order), list(seq.delta)
    u, v = _random_new_edge(g, rng)
    had = g.out_edges(u).get(v, 0)
    c = rng.randint(1, 10)
    g.add_edge(u, v, c)
    insert_edge_reorder(seq, g, u, v, c)
    g.delete_edge(u, v, c)
    reorder_after_decrease(seq, g, u, v)
    assert g.out_edges(u).get(v, 0) == had
    assert seq.order == before_order
    assert seq.delta == before_delta


def test_delete_where_later_endpoint_overtakes_kept_prefix():
    # deleting i->j lightens j below prefix vertices the queue never sees;
    # the backward scan must pull them anyway
    g = DynamicGraph()
    p, m, i, j, x = (g.add_vertex(lab) for lab in "pmijx")
    g.add_edge(i, j, 10)
    g.add_edge(j, x, 2)
    g.add_edge(i, m, 9)
    g.add_edge(i, x, 8)
    g.add_edge(p, x, 5)
    seq, _ = peel(g)
    assert seq.order[0] == p  # j is heavy while i->j stands
    g.delete_edge(i, j, 10)
    reorder_after_decrease(seq, g, i, j)
    assert_matches_static(seq, g)
    assert seq.order[0] == j  # j (weight 2) now precedes p (weight 5)


# --- composition --------------------------------------------------------------------

@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=40, deadline=None)
def test_mixed_operation_stream(case):
    g, rng = random_case(case, max_n=18, max_m=50)
    seq, _ = peel(g)
    for _ in range(12):
        op = rng.random()
        if op < 0.5 or g.num_edges == 0:
            u, v = _random_new_edge(g, rng)
            c = rng.randint(1, 10)
            g.add_edge(u, v, c)
            insert_edge_reorder(seq, g, u, v, c)
        elif op < 0.75:
            delta = GraphDelta()
            for _ in range(rng.randint(1, 5)):
                u, v = _random_new_edge(g, rng)
                c = rng.randint(1, 10)
                g.add_edge(u, v, c)
                delta.add_insert(u, v, c)
            insert_batch_reorder(seq, g, delta)
        else:
            edges = [(u, v) for u in g.vertices() for v in g.out_edges(u)]
            u, v = rng.choice(edges)
            g.delete_edge(u, v, g.out_edges(u)[v])
            reorder_after_decrease(seq, g, u, v)
    assert_matches_static(seq, g)
