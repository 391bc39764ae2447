import math

import pytest

from boxsizer import Cluster, Dims, Product
from boxsizer.oracle import exhaustive_1d, exhaustive_partition, exhaustive_split
from conftest import make_catalog


LINE_CATALOG = [  # lengths 1, 2, 10 with unit cross-section
    ("a", 1, 1, 1, 1.0),
    ("b", 2, 1, 1, 1.0),
    ("c", 10, 1, 1, 1.0),
]


class TestExhaustivePartition:
    def test_line_instance(self):
        cat = make_catalog(LINE_CATALOG)
        v_star, solution = exhaustive_partition(cat, 2)
        assert v_star == 14.0
        groups = {frozenset(c.members) for c in solution.clusters}
        assert groups == {frozenset({"a", "b"}), frozenset({"c"})}

    def test_k1_single_partition(self):
        cat = make_catalog(LINE_CATALOG)
        v_star, solution = exhaustive_partition(cat, 1)
        assert v_star == 30.0
        assert len(solution.clusters) == 1

    def test_k_at_least_n_singletons(self):
        cat = make_catalog(LINE_CATALOG)
        v_star, _ = exhaustive_partition(cat, 4)
        assert v_star == 1.0 + 2.0 + 10.0

    def test_guard_rails(self):
        cat = make_catalog([(f"p{i}", 1 + i, 1, 1, 1.0) for i in range(11)])
        with pytest.raises(ValueError, match="guard rail"):
            exhaustive_partition(cat, 2)
        small = make_catalog(LINE_CATALOG)
        with pytest.raises(ValueError, match="guard rail"):
            exhaustive_partition(small, 5)


class TestExhaustiveSplit:
    def test_line_instance(self):
        cat = make_catalog(LINE_CATALOG)
        cluster = Cluster.build([cat.product(i) for i in ("a", "b", "c")])
        plan = exhaustive_split(cluster, cat)
        assert plan.axis == "length"
        assert plan.cut == 2.0
        assert plan.gain == 16.0
        assert plan.left_members == frozenset({"a", "b"})

    def test_identical_dims_returns_none(self):
        cat = make_catalog([(f"p{i}", 2, 2, 2, 1.0) for i in range(4)])
        cluster = Cluster.build(list(cat))
        assert exhaustive_split(cluster, cat) is None

    def test_two_member_cross(self):
        cat = make_catalog([("a", 1, 1, 5, 1.0), ("b", 5, 1, 1, 1.0)])
        cluster = Cluster.build(list(cat))
        plan = exhaustive_split(cluster, cat)
        assert plan.gain == 40.0
        assert plan.axis == "length"  # height ties at 40; axis order wins
        assert plan.cut == 1.0


class TestExhaustive1D:
    def test_example_instance(self):
        cat = make_catalog([("a", 1, 1, 1, 1.0), ("b", 1, 1, 2, 1.0), ("c", 1, 1, 100, 1.0)])
        assert exhaustive_1d(cat, 2) == 104.0

    def test_k_equals_n(self):
        cat = make_catalog([("a", 1, 1, 1, 2.0), ("b", 1, 1, 2, 3.0)])
        assert exhaustive_1d(cat, 2) == 1 * 2 + 2 * 3

    def test_k1(self):
        cat = make_catalog([("a", 1, 1, 1, 2.0), ("b", 1, 1, 2, 3.0)])
        assert exhaustive_1d(cat, 1) == 2 * 5

    def test_guard_rail(self):
        cat = make_catalog([(f"p{i}", 1, 1, 1 + i, 1.0) for i in range(13)])
        with pytest.raises(ValueError, match="guard rail"):
            exhaustive_1d(cat, 2)
