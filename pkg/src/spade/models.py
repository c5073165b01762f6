"""Pluggable suspiciousness scoring.

A model supplies two pure functions: ``vsusp`` assigns a nonnegative weight
to a vertex at creation time, ``esusp`` a strictly positive weight to an
edge at insertion time.  Three ready-made instances cover the common density
metrics:

* dg -- every edge scores 1 (unweighted density |E[S]| / |S|)
* dw -- the raw transaction amount passes through unchanged
* fd -- degree-discounted 1 / ln(x + c), where x is the in-degree of the
  target vertex when the edge arrives

fd scores are frozen at insertion time; edges are never rescored as degrees
grow later.  Models are immutable and safe to share.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateLogError,
    NegativeVertexWeightError,
    NonPositiveWeightError,
)


@dataclass(frozen=True)
class FdParams:
    """Degree-discount constant for the fd metric (natural log base)."""

    c: float = 5.0

    def __post_init__(self):
        if self.c <= 1.0:
            raise DegenerateLogError(
                f"fd constant must exceed 1 so log(x + c) > 0 at degree 0, got {self.c}")


def esusp_dg(src, dst):
    """Unweighted metric: every edge contributes 1."""
    return 1


def esusp_dw(src, dst, raw_weight):
    """Edge-weighted metric: the raw weight passes through."""
    if raw_weight <= 0:
        raise NonPositiveWeightError(f"edge weight must be > 0, got {raw_weight}")
    return raw_weight


def esusp_fd(src, dst, target_degree, params: FdParams):
    """Degree-discounted metric: 1 / ln(x + c) for target in-degree x."""
    if target_degree < 0:
        raise DegenerateLogError(f"degree must be >= 0, got {target_degree}")
    arg = target_degree + params.c
    if arg <= 1.0:
        raise DegenerateLogError(f"log({arg}) <= 0 degenerates the edge score")
    return 1.0 / math.log(arg)


def vsusp_const(vertex, a):
    """Constant prior suspiciousness; the default is 0 for dg/dw."""
    if a < 0:
        raise NegativeVertexWeightError(f"vertex weight must be >= 0, got {a}")
    return a


class SuspiciousnessModel:
    """Bundles vsusp/esusp for one density metric.

    ``edge_score(src, dst, raw_weight, target_degree)`` is what the engine
    calls when an edge arrives; ``vertex_score(label, prior)`` when a vertex
    is created.  ``prior`` comes from the optional side file of per-vertex
    suspiciousness.
    """

    KINDS = ("dg", "dw", "fd")

    def __init__(self, kind: str, fd_params: FdParams | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown metric {kind!r}, expected one of {self.KINDS}")
        self.kind = kind
        self.fd_params = fd_params or FdParams()

    def vertex_score(self, label, prior=0):
        return vsusp_const(label, prior)

    def edge_score(self, src, dst, raw_weight, target_degree):
        if self.kind == "dg":
            return esusp_dg(src, dst)
        if self.kind == "dw":
            return esusp_dw(src, dst, raw_weight)
        return esusp_fd(src, dst, target_degree, self.fd_params)

    def __repr__(self):
        if self.kind == "fd":
            return f"SuspiciousnessModel(fd, c={self.fd_params.c})"
        return f"SuspiciousnessModel({self.kind})"
