import numpy as np
import pytest

from boxsizer import Catalog, Dims, Product, Solution


def make_catalog(rows, canonicalize=False):
    """rows: (id, length, width, height, velocity) tuples."""
    return Catalog(
        [Product(pid, Dims(l, w, h), s) for pid, l, w, h, s in rows],
        canonicalize=canonicalize,
    )


def make_solution(catalog, groups):
    """groups: iterable of id iterables."""
    return Solution.build(catalog, groups)


def random_catalog(rng, n, dim_lo=1, dim_hi=12, vel_hi=9, integer=True):
    """Small random catalog; integer dims/velocities keep float sums exact."""
    rows = []
    for i in range(n):
        if integer:
            l, w, h = rng.integers(dim_lo, dim_hi + 1, size=3).tolist()
            s = int(rng.integers(1, vel_hi + 1))
        else:
            l, w, h = np.round(rng.uniform(dim_lo, dim_hi, size=3), 3).tolist()
            s = float(np.round(rng.uniform(0.1, vel_hi), 3))
        rows.append((f"p{i:03d}", float(l), float(w), float(h), float(s)))
    return make_catalog(rows)


def random_partition(rng, catalog, n_clusters):
    """Random partition of the catalog into exactly n_clusters non-empty groups."""
    n = len(catalog)
    assert n >= n_clusters
    labels = np.concatenate(
        [np.arange(n_clusters), rng.integers(0, n_clusters, size=n - n_clusters)]
    )
    rng.shuffle(labels)
    groups = [[] for _ in range(n_clusters)]
    for i, g in enumerate(labels.tolist()):
        groups[g].append(catalog.ids[i])
    return make_solution(catalog, groups)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
