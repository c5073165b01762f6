"""Command-line entry points.

Subcommands: detect, replay, enumerate, window, verify, gen, bench.
Every subcommand prints a short human-readable summary and optionally
writes a schema-versioned JSON report (--report).  Exit codes: 0 success,
1 input/usage error, 2 internal invariant violation.
"""
from __future__ import annotations

import argparse
import os
import statistics
import sys
import time

from .engine import FlushPolicy
from .errors import SpadeError
from .oracle import densest_exact, gen_random, reference_peel
from .peeling import peel
from .streamio import (
    RunConfig,
    parse_stream,
    parse_vertex_weights,
    serialize_stream,
    write_report,
)
from .streamlab import (
    StreamEvent,
    UpdateStream,
    detect_window,
    enumerate_dense,
    make_engine,
    replay,
)


def _add_common(p):
    p.add_argument("--metric", choices=("dg", "dw", "fd"), default="dw")
    p.add_argument("--fd-c", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $SPADE_SEED or 0)")
    p.add_argument("--report", help="write a JSON report to this path")
    p.add_argument("--vertex-weights", help="side file of label<TAB>prior lines")


def _seed(args):
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("SPADE_SEED", "0"))


def _priors(args):
    return parse_vertex_weights(args.vertex_weights) if args.vertex_weights else None


def _emit(args, report):
    if args.report:
        write_report(report, args.report)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="spade",
        description="Streaming dense-subgraph fraud detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="static peel of a full stream file")
    p.add_argument("--input", required=True)
    _add_common(p)

    p = sub.add_parser("replay", help="replay a stream under one update mode")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("static", "inc", "batch", "group"),
                   default="inc")
    p.add_argument("--batch-size", type=int, default=10)
    p.add_argument("--init-fraction", type=float, default=0.9)
    p.add_argument("--flush-max-size", type=int, default=None)
    p.add_argument("--flush-max-age", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("enumerate", help="top-k vertex-disjoint communities")
    p.add_argument("--input", required=True)
    p.add_argument("-k", "--top", type=int, default=3)
    _add_common(p)

    p = sub.add_parser("window", help="detection over a target time window")
    p.add_argument("--input", required=True)
    p.add_argument("--baseline", required=True, metavar="START:END")
    p.add_argument("--target", required=True, metavar="START:END")
    _add_common(p)

    p = sub.add_parser("verify", help="run the oracle property suite")
    p.add_argument("--cases", type=int, default=200)
    _add_common(p)

    p = sub.add_parser("gen", help="generate a random stream file")
    p.add_argument("--output", required=True)
    p.add_argument("-n", "--vertices", type=int, default=50)
    p.add_argument("-m", "--edges", type=int, default=200)
    p.add_argument("--power-law", action="store_true")
    _add_common(p)

    p = sub.add_parser("bench", help="incremental vs static speedup table")
    p.add_argument("-n", "--vertices", type=int, default=2000)
    p.add_argument("-m", "--edges", type=int, default=10000)
    p.add_argument("--updates", type=int, default=50)
    _add_common(p)

    return parser


def _parse_window(text):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise SpadeError(f"window must be START:END, got {text!r}") from None


def _load_graph(args):
    """Build a scored graph from a stream file for non-replay commands."""
    stream = parse_stream(args.input)
    engine = make_engine(args.metric, args.fd_c, vertex_priors=_priors(args))
    engine.bootstrap((ev.src, ev.dst, ev.weight) for ev in stream)
    return stream, engine


def _cmd_detect(args):
    _stream, engine = _load_graph(args)
    det = engine.detect()
    labels = engine.community_labels(det)
    print(f"community of {len(labels)} vertices, density {det.density:.6g} "
          f"(graph: {engine.graph.num_vertices} vertices, "
          f"{engine.graph.num_edges} edges)")
    _emit(args, {
        "command": "detect",
        "metric": args.metric,
        "community": labels,
        "density": det.density,
        "prefix_index": det.prefix_index,
        "vertices": engine.graph.num_vertices,
        "edges": engine.graph.num_edges,
    })
    return 0


def _cmd_replay(args):
    stream = parse_stream(args.input, require_monotone=True)
    policy = None
    if args.flush_max_size is not None or args.flush_max_age is not None:
        policy = FlushPolicy(args.flush_max_size, args.flush_max_age)
    cfg = RunConfig(metric=args.metric, fd_c=args.fd_c, mode=args.mode,
                    batch_size=args.batch_size,
                    init_fraction=args.init_fraction, seed=_seed(args))
    report = replay(stream, mode=cfg.mode, metric=cfg.metric, fd_c=cfg.fd_c,
                    init_fraction=cfg.init_fraction, batch_size=cfg.batch_size,
                    flush_policy=policy, vertex_priors=_priors(args))
    ratio = ("n/a" if report.prevention_ratio is None
             else f"{report.prevention_ratio:.3f}")
    print(f"mode={report.mode} events={report.events} "
          f"detections={len(report.detections)} "
          f"latency_mean={report.latency_mean:.1f}us prevention={ratio}")
    _emit(args, {"command": "replay", **report.to_dict()})
    return 0


def _cmd_enumerate(args):
    _stream, engine = _load_graph(args)
    found = enumerate_dense(engine.graph, args.top)
    rows = [{"community": sorted(engine.graph.label(v) for v in comm),
             "density": d} for comm, d in found]
    for i, row in enumerate(rows, start=1):
        print(f"#{i}: {len(row['community'])} vertices, "
              f"density {row['density']:.6g}")
    if not rows:
        print("no positive-density community")
    _emit(args, {"command": "enumerate", "metric": args.metric,
                 "communities": rows})
    return 0


def _cmd_window(args):
    stream = parse_stream(args.input)
    baseline = _parse_window(args.baseline)
    target = _parse_window(args.target)
    det, engine = detect_window(stream, baseline, target,
                                metric=args.metric, fd_c=args.fd_c)
    labels = engine.community_labels(det)
    print(f"window [{target[0]}, {target[1]}): community of {len(labels)} "
          f"vertices, density {det.density:.6g}")
    _emit(args, {"command": "window", "metric": args.metric,
                 "baseline": list(baseline), "target": list(target),
                 "community": labels, "density": det.density})
    return 0


def _cmd_verify(args):
    """Seeded property sweep: production peel vs the naive reference, the
    1/2-approximation against exhaustive search, and mass conservation."""
    seed = _seed(args)
    failures = []
    checked = {"peel_vs_reference": 0, "half_approx": 0, "mass": 0}
    for case in range(args.cases):
        n = 2 + (case * 7 + seed) % 12
        m = min((case * 13 + seed) % 40, n * (n - 1))
        g = gen_random(n, m, seed * 100003 + case)
        seq, det = peel(g)
        order, deltas = reference_peel(g)
        checked["peel_vs_reference"] += 1
        if seq.order != order or seq.delta != deltas:
            failures.append(f"case {case}: peel disagrees with reference")
            continue
        checked["mass"] += 1
        if sum(seq.delta) != g.total_suspiciousness:
            failures.append(f"case {case}: sum of deltas != f(V)")
        if g.num_vertices <= 14:
            checked["half_approx"] += 1
            exact = densest_exact(g)
            if exact.density > 0 and det.density < 0.5 * exact.density - 1e-9:
                failures.append(f"case {case}: approximation below 1/2")
    for line in failures:
        print(f"FAIL {line}")
    print(f"verify: {args.cases} cases, {len(failures)} failures "
          f"({checked})")
    _emit(args, {"command": "verify", "cases": args.cases,
                 "checked": checked, "failures": failures})
    return 0 if not failures else 2


def _cmd_gen(args):
    g = gen_random(args.vertices, args.edges, _seed(args),
                   power_law=args.power_law)
    events = []
    ts = 0
    for u in g.vertices():
        for v, c in g.out_edges(u).items():
            ts += 1
            events.append(StreamEvent(g.label(u), g.label(v), c, ts, False))
    serialize_stream(UpdateStream(events), args.output)
    print(f"wrote {len(events)} events on {args.vertices} vertices "
          f"to {args.output}")
    _emit(args, {"command": "gen", "vertices": args.vertices,
                 "edges": len(events), "seed": _seed(args),
                 "output": args.output})
    return 0


def _cmd_bench(args):
    seed = _seed(args)
    g = gen_random(args.vertices, args.edges, seed, power_law=True)
    seq, _det = peel(g)
    rng_edges = gen_random(args.vertices, args.updates, seed + 1)

    from .incremental import insert_edge_reorder

    inc_times, static_times = [], []
    for u in rng_edges.vertices():
        for v, c in rng_edges.out_edges(u).items():
            g.add_edge(u, v, c)
            t0 = time.perf_counter()
            insert_edge_reorder(seq, g, u, v, c)
            inc_times.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            peel(g)
            static_times.append(time.perf_counter() - t0)
    inc_med = statistics.median(inc_times)
    static_med = statistics.median(static_times)
    speedup = static_med / inc_med if inc_med > 0 else float("inf")
    print(f"{len(inc_times)} updates on |V|={args.vertices}, |E|~{args.edges}:")
    print(f"  incremental median {inc_med * 1e6:9.1f} us")
    print(f"  static re-peel     {static_med * 1e6:9.1f} us")
    print(f"  speedup            {speedup:9.1f}x")
    _emit(args, {"command": "bench", "vertices": args.vertices,
                 "edges": args.edges, "updates": len(inc_times),
                 "incremental_median_us": inc_med * 1e6,
                 "static_median_us": static_med * 1e6,
                 "speedup": speedup})
    return 0


_COMMANDS = {
    "detect": _cmd_detect,
    "replay": _cmd_replay,
    "enumerate": _cmd_enumerate,
    "window": _cmd_window,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (SpadeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
