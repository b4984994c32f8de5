"""Point clouds, Euclidean distances, dataset generators, and exact oracles.

The oracles in this module (`brute_near_neighbours`, `exact_meb`,
`brute_restricted_doubling`) are deliberately simple, exhaustive
implementations. They are the ground truth that the sublinear structures in
the rest of the package are tested against, so they must stay independent of
those structures.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

__all__ = [
    "PointCloud",
    "Ball",
    "distance",
    "pairwise_distances",
    "brute_near_neighbours",
    "exact_meb",
    "brute_restricted_doubling",
    "restricted_dim",
    "generate",
    "read_points",
    "write_points",
    "ExactNearNeighbours",
]

# relative tolerance for oracle equality / containment checks
RTOL = 1e-9

# exhaustive oracles are exponential; refuse sizes where that stops being ok
MAX_MEB_POINTS = 25
MAX_DOUBLING_POINTS = 16


@dataclass(frozen=True)
class PointCloud:
    """A finite set of d-dimensional points with 0-based index identities."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array of shape (n, dim)")
        if pts.shape[0] < 1:
            raise ValueError("a point cloud needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite (no NaN/inf coordinates)")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class Ball:
    """A Euclidean ball given by an explicit center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=np.float64)
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, points: np.ndarray, rtol: float = RTOL) -> bool:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        d = np.linalg.norm(pts - self.center, axis=1)
        return bool(np.all(d <= self.radius * (1 + rtol) + 1e-300))


def distance(p: np.ndarray, q: np.ndarray) -> float:
    """Euclidean distance between two points of equal dimension."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.linalg.norm(p - q))


def pairwise_distances(cloud: PointCloud) -> np.ndarray:
    """Full n x n distance matrix (desk-scale helper)."""
    pts = cloud.points
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def brute_near_neighbours(cloud: PointCloud, q: int, r: float) -> np.ndarray:
    """Exactly the indices i with |P[i] - P[q]| <= r, including q itself."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if not 0 <= q < cloud.n:
        raise ValueError(f"query index {q} out of range")
    d = np.linalg.norm(cloud.points - cloud.points[q], axis=1)
    return np.flatnonzero(d <= r)


def _circumball(sub: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Smallest ball with all of `sub` on its boundary, or None if degenerate.

    The center is the point of the affine hull of `sub` equidistant from all
    its members.
    """
    if sub.shape[0] == 1:
        return sub[0].copy(), 0.0
    U = sub[1:] - sub[0]
    rhs = 0.5 * np.einsum("ij,ij->i", U, U)
    gram = U @ U.T
    try:
        y = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        return None
    center = sub[0] + y @ U
    radius = float(np.max(np.linalg.norm(sub - center, axis=1)))
    return center, radius


def exact_meb(points: np.ndarray) -> Ball:
    """Minimum enclosing ball by exhaustive search over support sets.

    Test oracle only: enumerates all candidate support subsets of size at
    most d+1, so it is exponential in the input size.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    m, d = pts.shape
    if m == 0:
        raise ValueError("exact_meb needs at least one point")
    if m > MAX_MEB_POINTS:
        raise ValueError(f"exact_meb is an oracle for <= {MAX_MEB_POINTS} points")
    best: tuple[np.ndarray, float] | None = None
    for size in range(1, min(d + 1, m) + 1):
        for idx in combinations(range(m), size):
            cand = _circumball(pts[list(idx)])
            if cand is None:
                continue
            center, radius = cand
            dmax = float(np.max(np.linalg.norm(pts - center, axis=1)))
            if dmax <= radius * (1 + RTOL) + 1e-300:
                radius = max(radius, dmax)
                if best is None or radius < best[1]:
                    best = (center, radius)
    assert best is not None, "a valid support set always exists"
    return Ball(best[0], best[1])


def _min_cover(universe: frozenset[int], sets: list[frozenset[int]]) -> int:
    """Size of a minimum sub-collection of `sets` covering `universe`."""
    if not universe:
        return 0
    useful = [s & universe for s in sets if s & universe]
    # drop dominated sets; keeps the search tiny
    useful = sorted(set(useful), key=len, reverse=True)
    kept: list[frozenset[int]] = []
    for s in useful:
        if not any(s < t or s == t for t in kept):
            kept.append(s)
    for size in range(1, len(kept) + 1):
        for combo in combinations(kept, size):
            merged: set[int] = set()
            for s in combo:
                merged |= s
            if universe <= merged:
                return size
    raise AssertionError("singleton balls always cover")


def brute_restricted_doubling(cloud: PointCloud, t: float) -> int:
    """Scale-restricted doubling constant by exhaustive set cover.

    Smallest lambda such that for every point p and every radius r <= t the
    points within r of p can be covered by lambda balls of radius r/2
    centered at points of the cloud. Covering centers are restricted to the
    cloud itself. Only radii equal to a pairwise distance (plus t itself)
    need testing; the constraint set changes nowhere else.
    """
    if t <= 0:
        raise ValueError("scale cap t must be positive")
    if cloud.n > MAX_DOUBLING_POINTS:
        raise ValueError(
            f"brute_restricted_doubling is an oracle for <= {MAX_DOUBLING_POINTS} points"
        )
    dist = pairwise_distances(cloud)
    lam = 1
    for p in range(cloud.n):
        radii = {float(r) for r in dist[p] if 0 < r <= t}
        radii.add(float(t))
        for r in sorted(radii):
            universe = frozenset(np.flatnonzero(dist[p] <= r).tolist())
            candidate_sets = [
                frozenset(np.flatnonzero(dist[c] <= r / 2).tolist()) & universe
                for c in range(cloud.n)
            ]
            lam = max(lam, _min_cover(universe, candidate_sets))
    return lam


def restricted_dim(lam: int) -> int:
    """Dimension corresponding to a doubling constant: ceil(log2 lam)."""
    if lam < 1:
        raise ValueError("doubling constant must be >= 1")
    return int(np.ceil(np.log2(lam))) if lam > 1 else 0


# ---------------------------------------------------------------------------
# dataset generators
# ---------------------------------------------------------------------------


def generate_affine(
    n: int, d: int, flat_dim: int, seed: int, *, extent: float = 1.0, noise: float = 0.0
) -> PointCloud:
    """Uniform sample of a random flat_dim-flat embedded in R^d."""
    if not 1 <= flat_dim <= d:
        raise ValueError("need 1 <= flat_dim <= d")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.standard_normal((d, flat_dim)))
    coords = rng.uniform(-extent, extent, size=(n, flat_dim))
    pts = coords @ basis.T
    if noise > 0:
        pts = pts + noise * rng.standard_normal((n, d))
    return PointCloud(pts)


def generate_sphere(
    n: int, d: int, seed: int, *, radius: float = 1.0, noise: float = 0.0
) -> PointCloud:
    """Points on (or near) the origin-centered sphere of the given radius."""
    if d < 2:
        raise ValueError("sphere needs d >= 2")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    radii = np.full(n, float(radius))
    if noise > 0:
        radii += noise * rng.uniform(-1.0, 1.0, size=n)
    return PointCloud(x * radii[:, None])


def generate_curve(
    n: int, d: int, seed: int, *, spacing: float = 0.05, turn: float = 0.35
) -> PointCloud:
    """Vertices of a polyline wiggling through the unit ball.

    Consecutive vertices are exactly `spacing` apart; `turn` controls how
    sharply the direction drifts per step.
    """
    if not 0 < spacing <= 1:
        raise ValueError("spacing must lie in (0, 1] to stay inside the unit ball")
    rng = np.random.default_rng(seed)
    pts = np.zeros((n, d))
    direction = rng.standard_normal(d)
    direction /= np.linalg.norm(direction)
    for i in range(1, n):
        direction = direction + turn * rng.standard_normal(d)
        direction /= np.linalg.norm(direction)
        nxt = pts[i - 1] + spacing * direction
        if np.linalg.norm(nxt) > 1.0:
            normal = pts[i - 1] / np.linalg.norm(pts[i - 1])
            direction = direction - 2 * np.dot(direction, normal) * normal
            direction /= np.linalg.norm(direction)
            nxt = pts[i - 1] + spacing * direction
        pts[i] = nxt
    return PointCloud(pts)


def generate_clustered(
    n: int,
    d: int,
    seed: int,
    *,
    clusters: int = 5,
    separation: float = 4.0,
    spread: float = 0.25,
) -> PointCloud:
    """Well-separated Gaussian blobs."""
    if clusters < 1 or clusters > n:
        raise ValueError("need 1 <= clusters <= n")
    rng = np.random.default_rng(seed)
    centers = separation * rng.standard_normal((clusters, d))
    assign = np.arange(n) % clusters
    pts = centers[assign] + spread * rng.standard_normal((n, d))
    return PointCloud(pts)


def generate_uniform(n: int, d: int, seed: int, *, side: float = 1.0) -> PointCloud:
    """Uniform sample of the axis-aligned cube [0, side]^d."""
    rng = np.random.default_rng(seed)
    return PointCloud(rng.uniform(0.0, side, size=(n, d)))


_GENERATORS = {
    "affine": generate_affine,
    "sphere": generate_sphere,
    "curve": generate_curve,
    "clustered": generate_clustered,
    "uniform": generate_uniform,
}


def generate(kind: str, **params) -> PointCloud:
    """Dispatch to a named generator. Deterministic given the seed."""
    if kind not in _GENERATORS:
        raise ValueError(f"unknown generator kind {kind!r}; choose from {sorted(_GENERATORS)}")
    try:
        return _GENERATORS[kind](**params)
    except TypeError as exc:
        raise ValueError(f"invalid parameters for generator {kind!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# point file format
# ---------------------------------------------------------------------------


def write_points(path: str | Path, cloud: PointCloud) -> None:
    """One point per line, coordinates space-separated; `# dim=` header."""
    lines = [f"# dim={cloud.dim}"]
    for row in cloud.points:
        lines.append(" ".join("%.17g" % x for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_points(path: str | Path) -> PointCloud:
    rows: list[list[float]] = []
    declared_dim: int | None = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# dim="):
                declared_dim = int(line.split("=", 1)[1])
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad coordinate: {exc}") from exc
        rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no points")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent dimensions {sorted(widths)}")
    if declared_dim is not None and widths != {declared_dim}:
        raise ValueError(f"{path}: header dim={declared_dim} but rows have {widths}")
    return PointCloud(np.array(rows, dtype=np.float64))


# ---------------------------------------------------------------------------
# exact near-neighbour primitive
# ---------------------------------------------------------------------------


class ExactNearNeighbours:
    """Exact radius queries over a fixed point set.

    Same call surface as the LSH primitive so forest construction can be run
    with either; used to separate structural bugs from probabilistic misses.
    """

    def __init__(self, points: np.ndarray, r: float):
        from scipy.spatial import cKDTree

        if r < 0:
            raise ValueError("radius must be nonnegative")
        self.points = np.asarray(points, dtype=np.float64)
        self.r = float(r)
        self._tree = cKDTree(self.points)

    def __call__(self, i: int) -> np.ndarray:
        hits = self._tree.query_ball_point(self.points[i], self.r)
        return np.sort(np.asarray(hits, dtype=np.intp))

    def all_near_pairs(self) -> np.ndarray:
        """All index pairs (i < j) within the query radius."""
        pairs = self._tree.query_pairs(self.r, output_type="ndarray")
        if pairs.size == 0:
            return pairs.reshape(0, 2)
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        return pairs[order]
