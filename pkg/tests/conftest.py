import numpy as np
import pytest

from scalenets.geometry import PointCloud, generate, pairwise_distances


def quantile_scale(cloud: PointCloud, q: float) -> float:
    d = pairwise_distances(cloud)
    return float(np.quantile(d[d > 0], q))


def median_nn(cloud: PointCloud) -> float:
    d = pairwise_distances(cloud)
    np.fill_diagonal(d, np.inf)
    return float(np.median(d.min(axis=1)))


# (name, cloud, t) triples exercising every generator at structural scale;
# one entry uses a deliberately awkward t so level rounding paths get hit
def structural_corpora(n: int = 150) -> list[tuple[str, PointCloud, float]]:
    out = []
    for name, kind, kwargs, q in [
        ("uniform", "uniform", dict(n=n, d=3), 0.25),
        ("clustered", "clustered", dict(n=n, d=4, clusters=6), 0.2),
        ("affine2", "affine", dict(n=n, d=6, flat_dim=2), 0.25),
        ("sphere", "sphere", dict(n=n, d=3, noise=0.05), 0.3),
        ("curve", "curve", dict(n=n, d=3, spacing=0.04), 0.2),
    ]:
        cloud = generate(kind, seed=hash(name) % 2**32, **kwargs)
        out.append((name, cloud, quantile_scale(cloud, q)))
    # awkward scale: just above a power boundary of the level formula
    cloud = generate("uniform", n=n, d=3, seed=77)
    out.append(("awkward-t", cloud, 2.2 * 11.0**-1 * 1.01))
    return out


@pytest.fixture(scope="session")
def corpora():
    return structural_corpora()
