import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxsizer import (
    Cluster,
    Dims,
    Product,
    cluster_volume,
    fits,
    tight_box,
    total_volume,
)
from conftest import make_catalog, make_solution


def P(pid, l, w, h, s=1.0):
    return Product(pid, Dims(l, w, h), s)


class TestDims:
    def test_positive_components_required(self):
        with pytest.raises(ValueError):
            Dims(0, 1, 1)
        with pytest.raises(ValueError):
            Dims(1, -2, 1)
        with pytest.raises(ValueError):
            Dims(1, 1, float("nan"))
        with pytest.raises(ValueError):
            Dims(float("inf"), 1, 1)

    def test_canonical_sorts_descending(self):
        assert Dims(1, 3, 2).canonical() == Dims(3, 2, 1)

    def test_volume(self):
        assert Dims(2, 3, 4).volume() == 24.0


class TestProduct:
    def test_velocity_zero_allowed(self):
        assert P("a", 1, 1, 1, 0.0).velocity == 0.0

    def test_negative_velocity_rejected(self):
        with pytest.raises(ValueError):
            P("a", 1, 1, 1, -1.0)


class TestTightBox:
    def test_single_element_identity(self):
        assert tight_box([P("a", 2, 3, 4)]) == Dims(2, 3, 4)

    def test_per_dimension_max(self):
        assert tight_box([P("a", 2, 3, 4), P("b", 4, 1, 1)]) == Dims(4, 3, 4)

    def test_identical_elements(self):
        ps = [P(f"p{i}", 1, 1, 1) for i in range(3)]
        assert tight_box(ps) == Dims(1, 1, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty cluster"):
            tight_box([])


class TestClusterVolume:
    def test_single_member(self):
        c = Cluster.build([P("a", 2, 3, 4, 1.0)])
        assert cluster_volume(c) == 24.0

    def test_two_members(self):
        c = Cluster.build([P("a", 2, 3, 4, 2.0), P("b", 4, 1, 1, 3.0)])
        assert cluster_volume(c) == 48.0 * 5.0

    def test_zero_velocity_sum(self):
        c = Cluster.build([P("a", 2, 3, 4, 0.0)])
        assert cluster_volume(c) == 0.0


class TestTotalVolume:
    def test_two_singletons(self):
        cat = make_catalog([("a", 1, 1, 1, 2.0), ("b", 2, 2, 2, 1.0)])
        s = make_solution(cat, [["a"], ["b"]])
        assert total_volume(s) == 10.0

    def test_one_cluster(self):
        cat = make_catalog([("a", 1, 1, 1, 1.0), ("b", 2, 2, 2, 1.0)])
        s = make_solution(cat, [["a", "b"]])
        assert total_volume(s) == 16.0

    def test_all_zero_velocity(self):
        cat = make_catalog([("a", 1, 1, 1, 0.0), ("b", 2, 2, 2, 0.0)])
        s = make_solution(cat, [["a", "b"]])
        assert total_volume(s) == 0.0


class TestFits:
    def test_equal_dims(self):
        assert fits(Dims(1, 2, 3), Dims(1, 2, 3))

    def test_rotation_by_sorting(self):
        assert fits(Dims(3, 1, 1), Dims(1, 1, 3), canonicalize=True)

    def test_no_rotation_by_default(self):
        assert not fits(Dims(3, 1, 1), Dims(1, 1, 3))


# --- property tests ---------------------------------------------------------

dim_values = st.integers(min_value=1, max_value=30)
velocities = st.integers(min_value=0, max_value=50)


@st.composite
def product_lists(draw, min_size=1, max_size=12):
    n = draw(st.integers(min_size, max_size))
    return [
        P(f"p{i}", draw(dim_values), draw(dim_values), draw(dim_values), draw(velocities))
        for i in range(n)
    ]


@settings(max_examples=60, deadline=None)
@given(product_lists(min_size=2, max_size=12), st.randoms(use_true_random=False))
def test_total_volume_invariant_under_ordering(products, rnd):
    cat = make_catalog([(p.id, *p.dims.as_tuple(), p.velocity) for p in products])
    ids = [p.id for p in products]
    cut = len(ids) // 2 or 1
    groups = [ids[:cut], ids[cut:]] if ids[cut:] else [ids]
    s1 = make_solution(cat, groups)
    shuffled_groups = [list(g) for g in groups]
    for g in shuffled_groups:
        rnd.shuffle(g)
    shuffled_groups.reverse()
    s2 = make_solution(cat, shuffled_groups)
    assert total_volume(s1) == total_volume(s2)


@settings(max_examples=60, deadline=None)
@given(product_lists(min_size=2, max_size=10), st.integers(1, 9))
def test_merge_superadditive(products, cut):
    # integer dims and velocities: all volume arithmetic below is exact
    cut = min(cut, len(products) - 1)
    a = Cluster.build(products[:cut])
    b = Cluster.build(products[cut:])
    merged = Cluster.build(products)
    assert cluster_volume(merged) >= cluster_volume(a) + cluster_volume(b)


@settings(max_examples=60, deadline=None)
@given(product_lists(min_size=2, max_size=10), st.integers(1, 9))
def test_split_never_increases_volume(products, cut):
    cut = min(cut, len(products) - 1)
    parent = Cluster.build(products)
    left = Cluster.build(products[:cut])
    right = Cluster.build(products[cut:])
    assert cluster_volume(left) + cluster_volume(right) <= cluster_volume(parent)


@settings(max_examples=60, deadline=None)
@given(product_lists(min_size=1, max_size=10))
def test_cluster_volume_linear_in_velocity(products):
    doubled = [P(p.id, *p.dims.as_tuple(), 2 * p.velocity) for p in products]
    assert cluster_volume(Cluster.build(doubled)) == 2 * cluster_volume(
        Cluster.build(products)
    )


def test_cluster_build_velocity_sum_tolerance():
    products = [P("a", 1, 1, 1, 0.1), P("b", 1, 1, 1, 0.2)]
    c = Cluster.build(products)
    assert math.isclose(c.velocity_sum, 0.3, rel_tol=1e-9)


def test_solution_validate_passes_on_built(rng):
    cat = make_catalog([(f"p{i}", 1 + i, 2, 3, 1.0) for i in range(6)])
    s = make_solution(cat, [["p0", "p1", "p2"], ["p3", "p4", "p5"]])
    s.validate(cat)
