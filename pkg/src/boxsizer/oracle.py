"""Brute-force ground truth used by the test suite.

These enumerators recompute boxes and velocity sums directly from the raw
catalog values instead of reusing the solver code paths, so they can serve
as independent oracles. Guard rails abort rather than silently attempt a
super-exponential enumeration.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .model import AXES, Catalog, Cluster, Solution
from .split import SplitPlan

PARTITION_N_MAX = 10
PARTITION_K_MAX = 4
SPLIT_N_MAX = 500
ONE_D_N_MAX = 12


def _group_volume(catalog: Catalog, idx: np.ndarray) -> float:
    """Tight-box volume times velocity sum, recomputed from raw dims."""
    rows = catalog.dims[idx]
    m0 = rows[:, 0].max()
    m1 = rows[:, 1].max()
    m2 = rows[:, 2].max()
    total = 0.0
    for v in catalog.velocities[idx].tolist():
        total += v
    return float(m0 * m1 * m2 * total)


def exhaustive_partition(catalog: Catalog, k: int) -> tuple[float, Solution]:
    """Minimal total volume over every partition into at most k groups."""
    n = len(catalog)
    if n == 0:
        raise ValueError("empty catalog")
    if k < 1:
        raise ValueError("k must be >= 1")
    if n > PARTITION_N_MAX or k > PARTITION_K_MAX:
        raise ValueError(
            f"guard rail: exhaustive_partition needs N <= {PARTITION_N_MAX} "
            f"and K <= {PARTITION_K_MAX}"
        )
    assign = [0] * n
    best_value = math.inf
    best_assign: list[int] | None = None

    def explore(i: int, used: int) -> None:
        nonlocal best_value, best_assign
        if i == n:
            groups = [[] for _ in range(used)]
            for j, g in enumerate(assign):
                groups[g].append(j)
            value = math.fsum(
                _group_volume(catalog, np.array(g, dtype=np.intp)) for g in groups
            )
            if value < best_value:
                best_value = value
                best_assign = assign.copy()
            return
        # restricted-growth labeling enumerates each set partition once
        for g in range(min(used + 1, k)):
            assign[i] = g
            explore(i + 1, max(used, g + 1))

    explore(0, 0)
    used = max(best_assign) + 1
    groups: list[list[str]] = [[] for _ in range(used)]
    for j, g in enumerate(best_assign):
        groups[g].append(catalog.ids[j])
    return best_value, Solution.build(catalog, groups)


def exhaustive_split(cluster: Cluster, catalog: Catalog) -> SplitPlan | None:
    """Every axis/cut evaluated with from-scratch boxes; same tie rules as the sweep."""
    members = np.array(
        sorted(catalog.index_of[pid] for pid in cluster.members), dtype=np.intp
    )
    if members.size > SPLIT_N_MAX:
        raise ValueError(f"guard rail: exhaustive_split needs N_k <= {SPLIT_N_MAX}")
    parent = _group_volume(catalog, members)
    best = None  # (gain, axis, cut, left, right)
    for axis in range(3):
        vals = catalog.dims[members, axis]
        for cut in sorted(set(vals.tolist()))[:-1]:
            left = members[vals <= cut]
            right = members[vals > cut]
            gain = parent - (
                _group_volume(catalog, left) + _group_volume(catalog, right)
            )
            if best is None or gain > best[0]:
                best = (gain, axis, cut, left, right)
    if best is None:
        return None
    gain, axis, cut, left, right = best
    ids = catalog.ids
    return SplitPlan(
        -1,
        AXES[axis],
        float(cut),
        float(gain),
        frozenset(ids[i] for i in left.tolist()),
        frozenset(ids[i] for i in right.tolist()),
    )


def exhaustive_1d(catalog: Catalog, k: int) -> float:
    """Minimal 1D objective over all contiguous partitions in volume order."""
    n = len(catalog)
    if n > ONE_D_N_MAX:
        raise ValueError(f"guard rail: exhaustive_1d needs N <= {ONE_D_N_MAX}")
    if k < 1 or k > n:
        raise ValueError(f"k={k} out of range for {n} products")
    order = sorted(range(n), key=lambda i: (catalog.volumes[i], catalog.ids[i]))
    vols = [float(catalog.volumes[i]) for i in order]
    vels = [float(catalog.velocities[i]) for i in order]
    best = math.inf
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        total = 0.0
        for a, b in zip(bounds, bounds[1:]):
            group_vel = 0.0
            for v in vels[a:b]:
                group_vel += v
            total += vols[b - 1] * group_vel
        if total < best:
            best = total
    return best
