"""Streaming dense-subgraph fraud detection via incremental greedy peeling."""

from .engine import EdgeClass, FlushPolicy, SpadeEngine
from .errors import SpadeError
from .graph import DynamicGraph, EdgeEvent, GraphDelta
from .incremental import (
    insert_batch_reorder,
    insert_edge_reorder,
    reorder_after_decrease,
)
from .models import FdParams, SuspiciousnessModel
from .oracle import densest_exact, f_split, gen_random, subset_density
from .peeling import DetectionResult, PeelingSequence, ReorderStats, peel
from .streamio import parse_stream, serialize_stream, write_report
from .streamlab import (
    ReplayReport,
    StreamEvent,
    UpdateStream,
    detect_window,
    enumerate_dense,
    prevention_ratio,
    replay,
)

__all__ = [
    "DetectionResult",
    "DynamicGraph",
    "EdgeClass",
    "EdgeEvent",
    "FdParams",
    "FlushPolicy",
    "GraphDelta",
    "PeelingSequence",
    "ReorderStats",
    "ReplayReport",
    "SpadeEngine",
    "SpadeError",
    "StreamEvent",
    "SuspiciousnessModel",
    "UpdateStream",
    "densest_exact",
    "detect_window",
    "enumerate_dense",
    "f_split",
    "gen_random",
    "insert_batch_reorder",
    "insert_edge_reorder",
    "parse_stream",
    "peel",
    "prevention_ratio",
    "reorder_after_decrease",
    "replay",
    "serialize_stream",
    "subset_density",
    "write_report",
]

__version__ = "0.1.0"
