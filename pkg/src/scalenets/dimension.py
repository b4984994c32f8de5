"""Local intrinsic dimension estimates from net-forest branching."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .forest import NetForest

__all__ = ["DimEstimate", "estimate_dim"]


@dataclass(frozen=True)
class DimEstimate:
    max_out_degree: int
    estimate: float
    t: float


def estimate_dim(forest: NetForest) -> DimEstimate:
    """log2 of the maximum child count over all nodes.

    Rel lists are diagnostics and do not count toward the out-degree. A
    forest of isolated leaves has estimate zero.
    """
    if not forest.nodes:
        raise ValueError("empty forest")
    x = max((len(v.children) for v in forest.nodes), default=0)
    x = max(x, 1)
    return DimEstimate(max_out_degree=x, estimate=math.log2(x), t=forest.t)
