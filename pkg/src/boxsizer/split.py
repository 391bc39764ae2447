"""Best axis-aligned binary cluster splits via sorted sweeps.

For one cluster and one axis the optimal cut among the N_k - 1 candidate
positions is found in O(N_k log N_k): sort members on the axis, then a
single left-to-right pass combines running maxima of the left child with
precomputed suffix maxima of the right child. Ties are fully deterministic:
smallest cut value, then axis order length/width/height, then (across a
whole solution) the lowest cluster index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._state import _STALE, PartitionState
from .model import AXES, Catalog, Cluster, Solution


@dataclass(frozen=True)
class SplitPlan:
    """Outcome of the best-cut search for one cluster.

    `cut` is the largest axis value kept on the left side: members whose axis
    value is <= cut form the left child, the rest the right child.
    cluster_index is -1 when the plan was computed for a free-standing
    cluster outside a solution.
    """

    cluster_index: int
    axis: str
    cut: float
    gain: float
    left_members: frozenset[str]
    right_members: frozenset[str]


@dataclass
class ArrayPlan:
    """A split in catalog-index form (internal)."""

    axis: int
    cut: float
    gain: float
    left: np.ndarray
    right: np.ndarray

    def to_plan(self, catalog: Catalog, cluster_index: int = -1) -> SplitPlan:
        ids = catalog.ids
        return SplitPlan(
            cluster_index,
            AXES[self.axis],
            self.cut,
            self.gain,
            frozenset(ids[i] for i in self.left.tolist()),
            frozenset(ids[i] for i in self.right.tolist()),
        )


def _axis_sweep(rows: np.ndarray, vels: np.ndarray, axis: int, parent_volume: float):
    """Best cut along `axis` for member rows sorted ascending on that axis.

    Returns (n_left, cut_value, gain) or None when all members share the axis
    value. Cuts never separate members with equal axis values, so only
    positions where the sorted value strictly increases are candidates; the
    first maximum wins, i.e. the smallest cut value.
    """
    vals = rows[:, axis]
    valid = vals[:-1] < vals[1:]
    if not valid.any():
        return None
    left_box = np.maximum.accumulate(rows, axis=0)
    right_box = np.maximum.accumulate(rows[::-1], axis=0)[::-1]
    left_vel = np.cumsum(vels)
    right_vel = np.cumsum(vels[::-1])[::-1]
    left_vol = left_box[:, 0] * left_box[:, 1] * left_box[:, 2]
    right_vol = right_box[:, 0] * right_box[:, 1] * right_box[:, 2]
    child_vol = left_vol[:-1] * left_vel[:-1] + right_vol[1:] * right_vel[1:]
    gains = np.where(valid, parent_volume - child_vol, -np.inf)
    best = int(np.argmax(gains))
    return best + 1, float(vals[best]), float(gains[best])


def best_split_members(
    catalog: Catalog, members: np.ndarray, parent_volume: float
) -> ArrayPlan | None:
    """Best cut over the three axes; equal gains pick the earlier axis."""
    best: ArrayPlan | None = None
    for axis in range(3):
        vals = catalog.dims[members, axis]
        order = members[np.argsort(vals, kind="stable")]
        hit = _axis_sweep(catalog.dims[order], catalog.velocities[order], axis, parent_volume)
        if hit is None:
            continue
        n_left, cut, gain = hit
        if best is None or gain > best.gain:
            best = ArrayPlan(axis, cut, gain, np.sort(order[:n_left]), np.sort(order[n_left:]))
    return best


def _cluster_members(cluster: Cluster, catalog: Catalog) -> np.ndarray:
    return np.array(sorted(catalog.index_of[pid] for pid in cluster.members), dtype=np.intp)


def best_split_for_axis(cluster: Cluster, catalog: Catalog, axis: str) -> SplitPlan | None:
    """Max-gain cut of `cluster` along one axis, or None if no distinct cut exists."""
    a = AXES.index(axis)
    members = _cluster_members(cluster, catalog)
    parent = cluster.box.volume() * cluster.velocity_sum
    vals = catalog.dims[members, a]
    order = members[np.argsort(vals, kind="stable")]
    hit = _axis_sweep(catalog.dims[order], catalog.velocities[order], a, parent)
    if hit is None:
        return None
    n_left, cut, gain = hit
    plan = ArrayPlan(a, cut, gain, np.sort(order[:n_left]), np.sort(order[n_left:]))
    return plan.to_plan(catalog)


def best_split(cluster: Cluster, catalog: Catalog) -> SplitPlan | None:
    """Max-gain cut over all three axes, or None for dimension-homogeneous clusters."""
    members = _cluster_members(cluster, catalog)
    parent = cluster.box.volume() * cluster.velocity_sum
    plan = best_split_members(catalog, members, parent)
    return None if plan is None else plan.to_plan(catalog)


def refresh_plans(state: PartitionState) -> None:
    """Fill in the per-cluster split-plan cache for clusters touched since last time."""
    for k in range(state.n_clusters):
        if state.split_plans[k] is _STALE:
            state.split_plans[k] = best_split_members(
                state.catalog, state.members[k], state.cluster_volume(k)
            )


def apply_best_split_state(state: PartitionState) -> bool:
    """Split the cluster whose best cut has the globally maximal gain.

    Returns False when no cluster admits a cut (all dimension-homogeneous).
    Equal gains resolve to the lowest cluster index; zero-gain splits are
    applied like any other.
    """
    refresh_plans(state)
    target = -1
    for k, plan in enumerate(state.split_plans):
        if plan is None:
            continue
        if target < 0 or plan.gain > state.split_plans[target].gain:
            target = k
    if target < 0:
        return False
    plan = state.split_plans[target]
    state.replace_with_children(target, plan.left, plan.right)
    return True


def apply_best_split(solution: Solution, catalog: Catalog) -> Solution:
    """Apply the globally best split; the chosen cluster is replaced in place
    by its left and right children (cluster count grows by one)."""
    state = PartitionState.from_solution(solution, catalog)
    if not apply_best_split_state(state):
        raise ValueError("no splittable cluster")
    return state.to_solution()
