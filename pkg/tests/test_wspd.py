import numpy as np
import pytest

from scalenets.forest import build_forest
from scalenets.geometry import PointCloud, generate
from scalenets.wspd import WsPair, Wspd, diam_bound, gen_wspd, read_wspd, verify_wspd, write_wspd

from conftest import quantile_scale


def build(cloud, t):
    return build_forest(cloud, t, nn="exact")


def test_two_tight_clusters_coverage():
    cloud = PointCloud(np.array([[0.0], [0.1], [10.0], [10.1]]))
    t = 20.0
    forest = build(cloud, t)
    wspd = gen_wspd(forest, cloud, 0.5, t)
    report = verify_wspd(cloud, forest, wspd, 0.5, t)
    assert report.ok
    # every cross point pair is covered by an emitted pair
    covered_cross = set()
    for pair in wspd.pairs:
        pu = set(forest.nodes[pair.u].points.tolist())
        pv = set(forest.nodes[pair.v].points.tolist())
        for p in pu & {0, 1}:
            for q in pv & {2, 3}:
                covered_cross.add((p, q))
        for p in pv & {0, 1}:
            for q in pu & {2, 3}:
                covered_cross.add((p, q))
    assert covered_cross == {(0, 2), (0, 3), (1, 2), (1, 3)}


def test_single_point_empty():
    cloud = PointCloud(np.array([[0.0, 0.0]]))
    forest = build(cloud, 1.0)
    wspd = gen_wspd(forest, cloud, 0.5, 1.0)
    assert wspd.pairs == []


def test_far_singletons_no_pairs():
    cloud = PointCloud(np.array([[0.0], [1000.0]]))
    t = 1.0
    forest = build(cloud, t)
    wspd = gen_wspd(forest, cloud, 0.5, t)
    assert wspd.pairs == []
    assert verify_wspd(cloud, forest, wspd, 0.5, t).ok  # coverage vacuous past t


def test_epsilon_validation():
    cloud = generate("uniform", n=10, d=2, seed=1)
    forest = build(cloud, 0.5)
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            gen_wspd(forest, cloud, bad, 0.5)


def test_scale_mismatch_rejected():
    cloud = generate("uniform", n=10, d=2, seed=1)
    forest = build(cloud, 0.5)
    with pytest.raises(ValueError):
        gen_wspd(forest, cloud, 0.5, 0.7)


def test_random_clouds_zero_violations(corpora):
    for name, cloud, t in corpora[:4]:
        forest = build(cloud, t)
        for eps in (0.3, 0.7):
            wspd = gen_wspd(forest, cloud, eps, t)
            report = verify_wspd(cloud, forest, wspd, eps, t)
            assert report.ok, f"{name} eps={eps}"


def test_verifier_flags_fabricated_violations():
    cloud = generate("clustered", n=40, d=2, seed=3, clusters=3)
    t = quantile_scale(cloud, 0.3)
    forest = build(cloud, t)
    wspd = gen_wspd(forest, cloud, 0.5, t)
    # separation: pair two fat sibling nodes that are far from separated
    root = forest.nodes[forest.roots[0]]
    if len(root.children) >= 2:
        broken = Wspd(
            pairs=sorted(
                set(wspd.pairs)
                | {WsPair(min(root.children[:2]), max(root.children[:2]))}
            ),
            epsilon=1e-6,
            t=t,
        )
        assert verify_wspd(cloud, forest, broken, 1e-6, t).separation_violations
    # coverage: delete one pair
    if wspd.pairs:
        pruned = Wspd(pairs=wspd.pairs[1:], epsilon=0.5, t=t)
        full = verify_wspd(cloud, forest, wspd, 0.5, t)
        broken = verify_wspd(cloud, forest, pruned, 0.5, t)
        assert len(broken.coverage_violations) >= len(full.coverage_violations)


def test_pairs_below_root_level(corpora):
    _, cloud, t = corpora[1]
    forest = build(cloud, t)
    wspd = gen_wspd(forest, cloud, 0.5, t)
    for pair in wspd.pairs:
        assert forest.nodes[pair.u].level <= forest.root_level
        assert forest.nodes[pair.v].level <= forest.root_level


def test_leaf_and_root_diameter_bounds():
    cloud = PointCloud(np.array([[0.0], [0.3], [9.0]]))
    forest = build(cloud, 1.0)
    for v in forest.nodes:
        if v.is_leaf:
            assert diam_bound(forest, v.id) == 0.0
        elif v.is_root:
            assert diam_bound(forest, v.id) == 2.0


def test_wspd_file_roundtrip(tmp_path):
    cloud = generate("uniform", n=30, d=2, seed=5)
    t = quantile_scale(cloud, 0.3)
    forest = build(cloud, t)
    wspd = gen_wspd(forest, cloud, 0.5, t)
    path = tmp_path / "out.wspd"
    write_wspd(path, wspd)
    first = path.read_text()
    back = read_wspd(path)
    assert back.pairs == wspd.pairs and back.epsilon == wspd.epsilon and back.t == wspd.t
    write_wspd(tmp_path / "again.wspd", back)
    assert (tmp_path / "again.wspd").read_text() == first


def test_verify_size_gate():
    cloud = generate("uniform", n=501, d=2, seed=1)
    with pytest.raises(ValueError):
        verify_wspd(cloud, None, Wspd([], 0.5, 1.0), 0.5, 1.0)
