"""Scale-restricted well-separated simplicial decompositions.

Generalizes the pair decomposition to tuples: a tuple of forest nodes is
epsilon-well-separated when any ball touching every node, inflated by
(1+epsilon), contains the union of the node point sets. The tier-j
collection covers every j-simplex whose minimum enclosing ball has radius
at most t.

Tier 1 is a (2t)-restricted pair decomposition at separation epsilon/2 (a
1-simplex fits in a radius-t ball exactly when its endpoints are within
2t), built on a forest at scale 2t. Higher tiers extend each tuple by the
cells, at a level tied to the tuple's cached enclosing ball, that lie
within the region where a new simplex vertex could make the extended
simplex still fit in a radius-t ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path

import numpy as np

from .forest import COVER_COEF, TAU, NetForest, descend_to_level
from .geometry import Ball, PointCloud, exact_meb
from .wspd import gen_wspd

__all__ = [
    "approx_meb",
    "WsTuple",
    "Wssd",
    "WssdReport",
    "gen_wssd",
    "verify_wssd",
    "write_wssd",
    "read_wssd",
]

_LEVEL_FLOOR = -250  # below any scale a float64 coordinate can resolve


def _approx_meb_batch(pts: np.ndarray, delta_meb: float) -> tuple[np.ndarray, np.ndarray]:
    """Centers and radii for a (T, m, d) stack of equal-size point sets.

    Iterative center shift: start at the first point and repeatedly move a
    shrinking fraction toward the farthest point for ceil(1/delta^2) rounds.
    Same arithmetic as the scalar path, vectorized across the T sets.
    """
    if not 0.0 < delta_meb <= 0.5:
        raise ValueError("delta_meb must lie in (0, 1/2]")
    centers = pts[:, 0, :].copy()
    rounds = int(math.ceil(1.0 / delta_meb**2))
    rows = np.arange(pts.shape[0])
    for i in range(1, rounds + 1):
        diff = pts - centers[:, None, :]
        far = np.argmax(np.einsum("tmd,tmd->tm", diff, diff), axis=1)
        centers += (pts[rows, far, :] - centers) / (i + 1.0)
    diff = pts - centers[:, None, :]
    radii = np.sqrt(np.einsum("tmd,tmd->tm", diff, diff).max(axis=1))
    return centers, radii


def approx_meb(points: np.ndarray, delta_meb: float = 0.05) -> Ball:
    """Enclosing ball with radius at most (1+delta_meb) times optimal.

    Deterministic; always contains the input.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] == 0:
        raise ValueError("approx_meb needs at least one point")
    centers, radii = _approx_meb_batch(pts[None, :, :], delta_meb)
    return Ball(centers[0], float(radii[0]))


@dataclass(frozen=True)
class WsTuple:
    """Ordered node tuple plus the enclosing ball of its representatives."""

    nodes: tuple[int, ...]
    meb: Ball


@dataclass
class Wssd:
    tiers: dict[int, list[WsTuple]]
    epsilon: float
    t: float
    k: int
    stats: dict[str, int] = field(default_factory=dict)


def _cover_bound(forest: NetForest, node_id: int) -> float:
    v = forest.nodes[node_id]
    if v.is_leaf:
        return 0.0
    if v.is_root:
        return forest.t
    return COVER_COEF * float(TAU) ** v.level


def _level_floor(value: float) -> int:
    """Largest integer lv with TAU**lv <= value (clamped far below use)."""
    if value <= float(TAU) ** _LEVEL_FLOOR:
        return _LEVEL_FLOOR
    return max(_LEVEL_FLOOR, math.floor(math.log(value, TAU) + 1e-12))


def gen_wssd(
    forest: NetForest,
    cloud: PointCloud,
    epsilon: float,
    k: int,
    t: float,
    delta_meb: float = 0.05,
) -> Wssd:
    """Tiered simplicial decomposition covering radius-<=t simplices.

    The forest must have been built at scale 2t. A tuple is extended only
    if its cached ball still allows a witnessed simplex of radius at most
    t; the new nodes are the cells at a level small enough to keep every
    extension well-separated, gathered through the rel lists of an ancestor
    (or through the root 7*(2t) neighbour lists when the required ancestor
    level exceeds the root level).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0,1)")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not math.isclose(forest.t, 2.0 * t, rel_tol=1e-9):
        raise ValueError(
            f"forest must be built at scale 2t={2.0 * t}, got {forest.t}"
        )
    pts = cloud.points
    rep_of = np.array([v.rep for v in forest.nodes], dtype=np.intp)
    stats = {"skipped": 0, "capped": 0, "fallback_all_roots": 0}

    def make_tier(node_tuples: list[tuple[int, ...]]) -> list[WsTuple]:
        if not node_tuples:
            return []
        stack = pts[rep_of[np.array(node_tuples, dtype=np.intp)]]
        centers, radii = _approx_meb_batch(stack, delta_meb)
        return [
            WsTuple(nodes=nodes, meb=Ball(centers[i], float(radii[i])))
            for i, nodes in enumerate(node_tuples)
        ]

    base = gen_wspd(forest, cloud, epsilon / 2.0, forest.t)
    tiers: dict[int, list[WsTuple]] = {1: make_tier([(p.u, p.v) for p in base.pairs])}

    neighbours = forest.roots_within_7t(cloud)
    cover = np.array([_cover_bound(forest, v.id) for v in forest.nodes])
    descend_cache: dict[tuple[int, int], list[int]] = {}

    def cells_at(w: int, lam: int) -> list[int]:
        key = (w, lam)
        if key not in descend_cache:
            descend_cache[key] = descend_to_level(forest, w, lam)
        return descend_cache[key]

    for j in range(1, k):
        seen: set[tuple[int, ...]] = set()
        extended: list[tuple[int, ...]] = []
        for tup in tiers[j]:
            r = tup.meb.radius
            maxcov = float(cover[list(tup.nodes)].max())
            if r / (1.0 + delta_meb) - maxcov > t:
                stats["skipped"] += 1
                continue
            r_floor = r / ((1.0 + delta_meb) * (1.0 + epsilon))
            lam = _level_floor(epsilon * r_floor / (4.0 * 2.0 * COVER_COEF))
            cell_pad = COVER_COEF * float(TAU) ** lam
            r_search = 3.0 * (r + maxcov) + cell_pad
            need = 4.0 * r + 3.0 * maxcov + cell_pad

            # the rel radius 14*tau^level must absorb two covering hops plus
            # the search reach, hence the 14 - 2*2.2 = 9.6 margin
            rel_margin = 14.0 - 2.0 * COVER_COEF
            v0 = forest.nodes[tup.nodes[0]]
            anchor = v0
            while not anchor.is_root and need > rel_margin * float(TAU) ** anchor.level:
                anchor = forest.nodes[anchor.parent]
            if not anchor.is_root:
                sources = anchor.rel
            else:
                stats["capped"] += 1
                root = forest.nodes[forest.root_of(v0.id)]
                need_root = 2.0 * forest.t + 4.0 * r + 3.0 * maxcov + cell_pad
                if need_root <= 7.0 * forest.t:
                    sources = neighbours[root.id]
                else:
                    stats["fallback_all_roots"] += 1
                    sources = forest.roots

            cands: list[int] = []
            seen_cells: set[int] = set()
            for w in sources:
                for c in cells_at(w, lam):
                    if c not in seen_cells:
                        seen_cells.add(c)
                        cands.append(c)
            cand_arr = np.array(cands, dtype=np.intp)
            d = np.linalg.norm(pts[rep_of[cand_arr]] - tup.meb.center, axis=1)
            for c in cand_arr[d <= r_search * (1 + 1e-12)]:
                nodes = tup.nodes + (int(c),)
                if nodes not in seen:
                    seen.add(nodes)
                    extended.append(nodes)
        tiers[j + 1] = make_tier(extended)

    return Wssd(tiers=tiers, epsilon=epsilon, t=float(t), k=k, stats=stats)


# ---------------------------------------------------------------------------
# verification oracle
# ---------------------------------------------------------------------------


@dataclass
class WssdReport:
    coverage_violations: list[tuple[int, ...]]
    separation_violations: list[tuple[tuple[int, ...], tuple[int, ...]]]

    @property
    def ok(self) -> bool:
        return not self.coverage_violations and not self.separation_violations


def _covers(masks: list[int], vertices: tuple[int, ...]) -> bool:
    """Can the vertices be matched one-to-one into the node point sets?"""
    from itertools import permutations

    for perm in permutations(range(len(masks))):
        if all((masks[perm[i]] >> v) & 1 for i, v in enumerate(vertices)):
            return True
    return False


def verify_wssd(
    cloud: PointCloud,
    forest: NetForest,
    wssd: Wssd,
    epsilon: float,
    k: int,
    t: float,
    rtol: float = 1e-9,
) -> WssdReport:
    """Exhaustive oracle for tuple coverage and separation.

    Coverage: every j-simplex (distinct vertices, j <= k) whose exact
    minimum enclosing ball has radius at most t must match into some tier-j
    tuple, one node per vertex. Separation: for every tuple and every
    transversal (one point from each node), the union of the node point
    sets lies in the transversal's exact enclosing ball inflated by
    (1+epsilon). A sufficient diameter-versus-gap test short-circuits the
    transversal enumeration where it provably passes.
    """
    if cloud.n > 62:
        raise ValueError("verify_wssd is an oracle for n <= 62")
    pts = cloud.points

    node_mask: dict[int, int] = {}
    for v in forest.nodes:
        m = 0
        for p in v.points:
            m |= 1 << int(p)
        node_mask[v.id] = m

    coverage: list[tuple[int, ...]] = []
    for j in range(1, k + 1):
        tuples = wssd.tiers.get(j, [])
        masks = [[node_mask[v] for v in tup.nodes] for tup in tuples]
        # union masks as uint64 (n <= 62 fits)
        unions = np.array([_union_mask(ms) for ms in masks], dtype=np.uint64)
        for vertices in combinations(range(cloud.n), j + 1):
            if exact_meb(pts[list(vertices)]).radius > t:
                continue
            smask = np.uint64(_union_mask([1 << v for v in vertices]))
            cand = np.flatnonzero((unions & smask) == smask)
            if not any(_covers(masks[c], vertices) for c in cand):
                coverage.append(vertices)

    separation: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for j, tuples in sorted(wssd.tiers.items()):
        for tup in tuples:
            sets = [forest.nodes[v].points for v in tup.nodes]
            union = np.unique(np.concatenate(sets))
            diam = 0.0
            for s in sets:
                if s.size > 1:
                    sub = pts[s]
                    diff = sub[:, None, :] - sub[None, :, :]
                    diam = max(diam, float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).max())))
            gap_half = 0.0
            for a in range(len(sets)):
                for b in range(a + 1, len(sets)):
                    d = np.linalg.norm(
                        pts[sets[a]][:, None, :] - pts[sets[b]][None, :, :], axis=2
                    )
                    gap_half = max(gap_half, float(d.min()) / 2.0)
            if diam <= epsilon * gap_half * (1 - 1e-12):
                continue  # provably separated: any touching ball has radius >= gap_half
            for transversal in product(*[s.tolist() for s in sets]):
                ball = exact_meb(pts[list(transversal)])
                d = np.linalg.norm(pts[union] - ball.center, axis=1)
                if float(d.max()) > (1.0 + epsilon) * ball.radius * (1 + rtol):
                    separation.append((tup.nodes, transversal))
                    break

    return WssdReport(coverage_violations=coverage, separation_violations=separation)


def _union_mask(masks: list[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def write_wssd(path: str | Path, wssd: Wssd) -> None:
    lines = [
        "wssd v1 epsilon=%.17g k=%d t=%.17g" % (wssd.epsilon, wssd.k, wssd.t)
    ]
    for j in sorted(wssd.tiers):
        for tup in wssd.tiers[j]:
            lines.append("tuple %d %s" % (j, " ".join(str(v) for v in tup.nodes)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_wssd(path: str | Path) -> Wssd:
    """Parse tuples back; cached balls are not stored in the file."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("wssd v1 "):
        raise ValueError(f"{path}: not a wssd v1 file")
    header = dict(tok.split("=", 1) for tok in text[0].split()[2:])
    tiers: dict[int, list[WsTuple]] = {}
    for line in text[1:]:
        if not line.strip():
            continue
        toks = line.split()
        if toks[0] != "tuple":
            raise ValueError(f"{path}: unexpected line {line!r}")
        j = int(toks[1])
        nodes = tuple(int(x) for x in toks[2:])
        if len(nodes) != j + 1:
            raise ValueError(f"{path}: tier {j} tuple with {len(nodes)} nodes")
        tiers.setdefault(j, []).append(
            WsTuple(nodes=nodes, meb=Ball(np.zeros(1), 0.0))
        )
    return Wssd(
        tiers=tiers,
        epsilon=float(header["epsilon"]),
        t=float(header["t"]),
        k=int(header["k"]),
    )
