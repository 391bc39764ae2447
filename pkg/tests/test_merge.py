import math

import pytest

from boxsizer import best_merge_pair, combine_clusters, total_volume
from conftest import make_catalog, make_solution, random_catalog, random_partition


XYZ = [
    ("x", 1, 1, 1, 1.0),
    ("y", 1, 1, 2, 1.0),
    ("z", 10, 10, 10, 1.0),
]


class TestBestMergePair:
    def test_xyz_instance(self):
        cat = make_catalog(XYZ)
        solution = make_solution(cat, [["x"], ["y"], ["z"]])
        k1, k2, delta = best_merge_pair(solution)
        assert (k1, k2) == (0, 1)
        assert delta == 1.0  # merged (1,1,2)*2 = 4 vs 1 + 2

    def test_identical_clusters_zero_delta(self):
        cat = make_catalog([("a", 2, 3, 4, 1.0), ("b", 2, 3, 4, 1.0)])
        solution = make_solution(cat, [["a"], ["b"]])
        _, _, delta = best_merge_pair(solution)
        assert delta == 0.0

    def test_single_cluster_rejected(self):
        cat = make_catalog([("a", 1, 1, 1, 1.0)])
        solution = make_solution(cat, [["a"]])
        with pytest.raises(ValueError, match="nothing to merge"):
            best_merge_pair(solution)

    def test_delta_nonnegative_random(self, rng):
        for _ in range(30):
            cat = random_catalog(rng, int(rng.integers(5, 16)), integer=False)
            c = int(rng.integers(2, min(6, len(cat)) + 1))
            solution = random_partition(rng, cat, c)
            _, _, delta = best_merge_pair(solution)
            assert delta >= 0.0

    def test_delta_matches_volume_difference(self, rng):
        for _ in range(30):
            cat = random_catalog(rng, int(rng.integers(4, 16)))
            c = int(rng.integers(2, 6))
            solution = random_partition(rng, cat, c)
            _, _, delta = best_merge_pair(solution)
            merged = combine_clusters(solution)
            diff = total_volume(merged) - total_volume(solution)
            assert math.isclose(delta, diff, rel_tol=1e-9, abs_tol=1e-9 * max(1.0, total_volume(solution)))


class TestCombineClusters:
    def test_xyz_instance(self):
        cat = make_catalog(XYZ)
        solution = make_solution(cat, [["x"], ["y"], ["z"]])
        after = combine_clusters(solution)
        assert len(after.clusters) == 2
        members = {frozenset(c.members) for c in after.clusters}
        assert members == {frozenset({"x", "y"}), frozenset({"z"})}
        assert total_volume(after) == 4.0 + 1000.0

    def test_two_to_one(self):
        cat = make_catalog([("a", 1, 1, 1, 1.0), ("b", 2, 2, 2, 1.0)])
        solution = make_solution(cat, [["a"], ["b"]])
        after = combine_clusters(solution)
        assert len(after.clusters) == 1
        assert after.clusters[0].members == frozenset({"a", "b"})

    def test_member_multiset_preserved(self, rng):
        for _ in range(20):
            cat = random_catalog(rng, int(rng.integers(4, 14)))
            c = int(rng.integers(2, 5))
            solution = random_partition(rng, cat, c)
            after = combine_clusters(solution)
            assert len(after.clusters) == c - 1
            before_members = sorted(pid for cl in solution.clusters for pid in cl.members)
            after_members = sorted(pid for cl in after.clusters for pid in cl.members)
            assert before_members == after_members
            after.validate(cat)
