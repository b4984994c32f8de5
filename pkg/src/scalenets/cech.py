"""Approximate truncated Cech filtrations from a simplicial decomposition.

For each scale alpha in a grid over (0, t], points are coarsened to the
net cells at a level h(alpha) chosen so the cell radius is at most
(epsilon/7) * alpha. Every decomposition tuple whose nodes sit strictly
below that level maps to a simplex over cell representatives, kept when
the exact enclosing ball of those representatives has radius at most
(1 + epsilon/2) * alpha. The result sandwiches the exact Cech complex at
alpha: every exact simplex appears under the vertex coarsening, and every
kept simplex has representative radius at most (1 + epsilon) * alpha.

The decomposition fed in must be built noticeably deeper than the target
epsilon, so that the tuples covering a simplex are fine enough to survive
the level gate at every grid scale; `build_cech_pipeline` uses
epsilon/42.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .forest import COVER_COEF, TAU, NetForest, build_forest, vcell
from .geometry import PointCloud, exact_meb
from .wssd import Wssd, gen_wssd

__all__ = [
    "FiltrationSlice",
    "FiltrationOutput",
    "SandwichReport",
    "choose_h",
    "default_grid",
    "build_filtration",
    "build_cech_pipeline",
    "verify_sandwich",
    "write_filtration",
    "read_filtration",
]

# depth margin for the internal decomposition; covering tuples must clear
# the level gate h(alpha) even when the root level rounded down a full step
DEPTH_FACTOR = 42.0


def choose_h(epsilon: float, alpha: float, rl: int) -> int:
    """Largest integer h with 2.2 * 11^h <= (epsilon/7) * alpha, below rl.

    The cap at rl - 1 keeps every cell lookup inside the forest; it only
    ever makes the coarsening finer.
    """
    if alpha <= 0 or epsilon <= 0:
        raise ValueError("alpha and epsilon must be positive")
    target = (epsilon / 7.0) * alpha / COVER_COEF
    if target <= 0:
        raise ValueError("degenerate coarsening target")
    h = math.floor(math.log(target, TAU) + 1e-12)
    while COVER_COEF * float(TAU) ** (h + 1) <= (epsilon / 7.0) * alpha * (1 + 1e-12):
        h += 1
    while COVER_COEF * float(TAU) ** h > (epsilon / 7.0) * alpha * (1 + 1e-12):
        h -= 1
    return min(h, rl - 1)


@dataclass
class FiltrationSlice:
    alpha: float
    h: int
    vertex_map: dict[int, int]
    simplices: set[tuple[int, ...]]


@dataclass
class FiltrationOutput:
    slices: list[FiltrationSlice]
    epsilon: float
    t: float


def default_grid(cloud: PointCloud, epsilon: float, t: float) -> np.ndarray:
    """Geometric grid from half the closest-pair distance up to t."""
    diff = cloud.points[:, None, :] - cloud.points[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    positive = d[d > 0]
    if positive.size == 0:
        return np.array([t])
    alpha = float(positive.min()) / 2.0
    ratio = 1.0 + epsilon / 7.0
    out = []
    while alpha <= t and len(out) <= 5000:
        out.append(alpha)
        alpha *= ratio
    if len(out) > 5000:
        raise ValueError("default grid too fine; pass an explicit grid")
    return np.array(out)


def _vcell_node(forest: NetForest, node_id: int, h: int) -> int:
    """Ancestor cell of a node at coarsening level h (node level below h)."""
    v = forest.nodes[node_id]
    while v.parent is not None and forest.nodes[v.parent].level < h:
        v = forest.nodes[v.parent]
    return v.id


def build_filtration(
    forest: NetForest,
    cloud: PointCloud,
    wssd: Wssd,
    epsilon: float,
    t: float,
    grid: np.ndarray | None = None,
) -> FiltrationOutput:
    """One approximation complex per grid scale, emitted independently.

    The decomposition must cover radius-<=t simplices on this forest and be
    built at least as deep as `epsilon` (a smaller epsilon of its own).
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0,1]")
    if wssd.epsilon > epsilon + 1e-12:
        raise ValueError("decomposition must be built at least as deep as epsilon")
    if grid is None:
        grid = default_grid(cloud, epsilon, t)
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(grid <= 0) or np.any(grid > t * (1 + 1e-12)):
        raise ValueError("grid values must lie in (0, t]")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")

    pts = cloud.points
    slices: list[FiltrationSlice] = []
    rad_cache: dict[tuple[int, ...], float] = {}

    for alpha in grid:
        h = choose_h(epsilon, float(alpha), forest.root_level)
        theta = (1.0 + epsilon / 2.0) * float(alpha)
        vertex_map = {p: forest.nodes[vcell(forest, p, h)].rep for p in range(cloud.n)}

        simplices: set[tuple[int, ...]] = set()
        for j in sorted(wssd.tiers):
            for tup in wssd.tiers[j]:
                ok = True
                for vid in tup.nodes:
                    v = forest.nodes[vid]
                    if not (v.is_leaf or v.level < h):
                        ok = False
                        break
                if not ok:
                    continue
                reps = {
                    forest.nodes[_vcell_node(forest, vid, h)].rep for vid in tup.nodes
                }
                if len(reps) < 2:
                    continue
                key = tuple(sorted(reps))
                if key not in rad_cache:
                    rad_cache[key] = exact_meb(pts[list(key)]).radius
                if rad_cache[key] <= theta * (1 + 1e-12):
                    simplices.add(key)
        # close under faces so each slice is a simplicial complex
        closure: set[tuple[int, ...]] = set()
        for simplex in simplices:
            for size in range(2, len(simplex)):
                closure.update(combinations(simplex, size))
        simplices |= closure
        slices.append(
            FiltrationSlice(
                alpha=float(alpha), h=h, vertex_map=vertex_map, simplices=simplices
            )
        )
    return FiltrationOutput(slices=slices, epsilon=epsilon, t=float(t))


def build_cech_pipeline(
    cloud: PointCloud,
    epsilon: float,
    k: int,
    t: float,
    seed: int = 0,
    *,
    nn: str = "exact",
    grid: np.ndarray | None = None,
    rho: float = 0.5,
    delta: float = 0.1,
) -> tuple[NetForest, Wssd, FiltrationOutput]:
    """Forest at 2t, decomposition at epsilon/DEPTH_FACTOR, then the slices."""
    forest = build_forest(cloud, 2.0 * t, seed, nn=nn, rho=rho, delta=delta)
    wssd = gen_wssd(forest, cloud, epsilon / DEPTH_FACTOR, k, t)
    output = build_filtration(forest, cloud, wssd, epsilon, t, grid)
    return forest, wssd, output


# ---------------------------------------------------------------------------
# sandwich oracle
# ---------------------------------------------------------------------------


@dataclass
class SandwichReport:
    lower_violations: list[tuple[float, tuple[int, ...]]]
    upper_violations: list[tuple[float, tuple[int, ...]]]

    @property
    def ok(self) -> bool:
        return not self.lower_violations and not self.upper_violations


def verify_sandwich(
    cloud: PointCloud,
    output: FiltrationOutput,
    epsilon: float,
    k: int,
    rtol: float = 1e-9,
) -> SandwichReport:
    """Per-scale containment oracle against the exact Cech complex.

    Lower: every exact Cech simplex at alpha (vertex set of size <= k+1
    with exact enclosing radius <= alpha) maps under the slice's vertex map
    to a simplex present in the slice. Upper: every slice simplex has
    representative enclosing radius at most (1+epsilon) * alpha.
    """
    if cloud.n > 40:
        raise ValueError("verify_sandwich is an oracle for n <= 40")
    pts = cloud.points

    radius: dict[tuple[int, ...], float] = {}
    for size in range(2, k + 2):
        for vertices in combinations(range(cloud.n), size):
            radius[vertices] = exact_meb(pts[list(vertices)]).radius

    lower: list[tuple[float, tuple[int, ...]]] = []
    upper: list[tuple[float, tuple[int, ...]]] = []
    for sl in output.slices:
        present = set(sl.simplices)
        for vertices, rad in radius.items():
            if rad > sl.alpha:
                continue
            image = tuple(sorted({sl.vertex_map[v] for v in vertices}))
            if len(image) >= 2 and image not in present:
                lower.append((sl.alpha, vertices))
        for simplex in sl.simplices:
            if exact_meb(pts[list(simplex)]).radius > (1 + epsilon) * sl.alpha * (1 + rtol):
                upper.append((sl.alpha, simplex))
    return SandwichReport(lower_violations=lower, upper_violations=upper)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def write_filtration(path: str | Path, output: FiltrationOutput) -> None:
    lines = ["cechapprox v1 epsilon=%.17g t=%.17g" % (output.epsilon, output.t)]
    for sl in output.slices:
        lines.append("slice alpha=%.17g h=%d" % (sl.alpha, sl.h))
        for p in sorted(sl.vertex_map):
            lines.append(f"vmap {p} {sl.vertex_map[p]}")
        for simplex in sorted(sl.simplices):
            lines.append(
                "simplex %d %s" % (len(simplex) - 1, " ".join(str(v) for v in simplex))
            )
    Path(path).write_text("\n".join(lines) + "\n")


def read_filtration(path: str | Path) -> FiltrationOutput:
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("cechapprox v1 "):
        raise ValueError(f"{path}: not a cechapprox v1 file")
    header = dict(tok.split("=", 1) for tok in text[0].split()[2:])
    slices: list[FiltrationSlice] = []
    current: FiltrationSlice | None = None
    for line in text[1:]:
        if not line.strip():
            continue
        toks = line.split()
        if toks[0] == "slice":
            fields = dict(tok.split("=", 1) for tok in toks[1:])
            current = FiltrationSlice(
                alpha=float(fields["alpha"]),
                h=int(fields["h"]),
                vertex_map={},
                simplices=set(),
            )
            slices.append(current)
        elif toks[0] == "vmap":
            if current is None:
                raise ValueError(f"{path}: vmap before any slice")
            current.vertex_map[int(toks[1])] = int(toks[2])
        elif toks[0] == "simplex":
            if current is None:
                raise ValueError(f"{path}: simplex before any slice")
            current.simplices.add(tuple(int(v) for v in toks[2:]))
        else:
            raise ValueError(f"{path}: unexpected line {line!r}")
    return FiltrationOutput(
        slices=slices, epsilon=float(header["epsilon"]), t=float(header["t"])
    )
