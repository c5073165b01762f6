"""Edge-stream text format, run configuration, and JSON reports.

The stream format is one event per tab-separated line:
src_label, dst_label, weight (default 1), timestamp in integer
microseconds (default: line number), fraud label 0|1 (default 0).
Lines starting with '#' are comments.  parse(serialize(s)) == s.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedLineError, NonPositiveWeightError
from .streamlab import StreamEvent, UpdateStream

REPORT_SCHEMA = "spade-report/1"


@dataclass
class RunConfig:
    """Validated knobs shared by the CLI subcommands."""

    metric: str = "dw"
    fd_c: float = 5.0
    init_fraction: float = 0.9
    mode: str = "inc"
    batch_size: int = 10
    flush_max_size: int | None = None
    flush_max_age: float | None = None
    seed: int = 0
    report_path: str | None = None

    def __post_init__(self):
        if self.metric not in ("dg", "dw", "fd"):
            raise ValueError(f"metric must be dg|dw|fd, got {self.metric!r}")
        if self.metric == "fd" and self.fd_c <= 1:
            raise ValueError("--fd-c must exceed 1")
        if not 0 <= self.init_fraction <= 1:
            raise ValueError("--init-fraction must lie in [0, 1]")
        if self.mode not in ("static", "inc", "batch", "group"):
            raise ValueError(f"mode must be static|inc|batch|group, got {self.mode!r}")
        if self.batch_size < 1:
            raise ValueError("--batch-size must be >= 1")


def _parse_number(text, lineno, what):
    try:
        return float(text)
    except ValueError:
        raise MalformedLineError(lineno, f"bad {what}: {text!r}") from None


def parse_stream(path, require_monotone=False) -> UpdateStream:
    """Read an edge-stream file; errors carry the 1-based line number."""
    events = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2 or len(parts) > 5 or not parts[0] or not parts[1]:
                raise MalformedLineError(
                    lineno, f"expected 2-5 tab-separated fields, got {len(parts)}")
            src, dst = parts[0], parts[1]
            weight = _parse_number(parts[2], lineno, "weight") if len(parts) > 2 else 1.0
            if weight <= 0:
                raise NonPositiveWeightError(
                    f"line {lineno}: weight must be positive, got {weight}")
            ts = int(_parse_number(parts[3], lineno, "timestamp")) if len(parts) > 3 else lineno
            if len(parts) > 4:
                if parts[4] not in ("0", "1"):
                    raise MalformedLineError(lineno, f"label must be 0 or 1, got {parts[4]!r}")
                label = parts[4] == "1"
            else:
                label = False
            events.append(StreamEvent(src, dst, weight, ts, label))
    return UpdateStream(events, require_monotone=require_monotone)


def _format_weight(w):
    return repr(int(w)) if isinstance(w, float) and w.is_integer() else repr(w)


def serialize_stream(stream: UpdateStream, path):
    """Write the full 5-field form of every event (round-trip identity)."""
    with open(path, "w", encoding="utf-8") as fh:
        for ev in stream:
            fh.write(f"{ev.src}\t{ev.dst}\t{_format_weight(ev.weight)}"
                     f"\t{ev.ts}\t{1 if ev.label else 0}\n")


def parse_vertex_weights(path) -> dict:
    """Side file of prior vertex suspiciousness: label<TAB>weight lines."""
    priors = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise MalformedLineError(lineno, "expected label<TAB>weight")
            priors[parts[0]] = _parse_number(parts[1], lineno, "vertex weight")
    return priors


def write_report(report: dict, path):
    """Schema-versioned JSON with deterministic (sorted) field order."""
    payload = {"schema": REPORT_SCHEMA}
    payload.update(report)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
