"""Mutable array-backed partition used by the pipeline internals.

`PartitionState` mirrors `Solution` but keeps cluster membership as sorted
catalog-index arrays with cached tight boxes and velocity sums, so the
split/reassign/refine/merge primitives can run vectorized. Public module
operations convert at their boundaries; the pipeline keeps one state alive
across all stages. Member arrays stay sorted ascending by catalog index,
which pins the float summation order and makes every downstream sweep
independent of how the input was ordered.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .model import Catalog, Cluster, Dims, Solution

# cache marker for split plans that must be recomputed
_STALE = object()


def _velocity_sum(catalog: Catalog, members: np.ndarray) -> float:
    return math.fsum(catalog.velocities[members].tolist())


class PartitionState:
    def __init__(self, catalog: Catalog, members: Iterable[np.ndarray]):
        self.catalog = catalog
        self.members: list[np.ndarray] = [
            np.sort(np.asarray(m, dtype=np.intp)) for m in members
        ]
        if not self.members or any(m.size == 0 for m in self.members):
            raise ValueError("empty cluster")
        n = len(self.members)
        self.boxes = np.zeros((n, 3), dtype=np.float64)
        self.velsums = np.zeros(n, dtype=np.float64)
        for k in range(n):
            self._refresh(k)
        self.split_plans: list = [_STALE] * n

    @classmethod
    def single_cluster(cls, catalog: Catalog) -> "PartitionState":
        if len(catalog) == 0:
            raise ValueError("empty catalog")
        return cls(catalog, [np.arange(len(catalog), dtype=np.intp)])

    @classmethod
    def from_solution(cls, solution: Solution, catalog: Catalog) -> "PartitionState":
        groups = []
        for cluster in solution.clusters:
            idx = np.array(
                sorted(catalog.index_of[pid] for pid in cluster.members), dtype=np.intp
            )
            groups.append(idx)
        return cls(catalog, groups)

    # -- cache maintenance -------------------------------------------------

    def _refresh(self, k: int) -> None:
        m = self.members[k]
        self.boxes[k] = self.catalog.dims[m].max(axis=0)
        self.velsums[k] = _velocity_sum(self.catalog, m)

    def touch(self, k: int) -> None:
        self.split_plans[k] = _STALE

    @property
    def n_clusters(self) -> int:
        return len(self.members)

    def box_volumes(self) -> np.ndarray:
        return self.boxes[:, 0] * self.boxes[:, 1] * self.boxes[:, 2]

    def cluster_volume(self, k: int) -> float:
        b = self.boxes[k]
        return float(b[0] * b[1] * b[2] * self.velsums[k])

    def total_volume(self) -> float:
        terms = self.box_volumes() * self.velsums
        return math.fsum(terms.tolist())

    def assignment_vector(self) -> np.ndarray:
        assign = np.empty(len(self.catalog), dtype=np.intp)
        for k, m in enumerate(self.members):
            assign[m] = k
        return assign

    def to_solution(self) -> Solution:
        ids = self.catalog.ids
        clusters = []
        assignment: dict[str, int] = {}
        for k, m in enumerate(self.members):
            names = [ids[i] for i in m.tolist()]
            b = self.boxes[k]
            clusters.append(
                Cluster(
                    frozenset(names),
                    Dims(float(b[0]), float(b[1]), float(b[2])),
                    float(self.velsums[k]),
                )
            )
            for pid in names:
                assignment[pid] = k
        return Solution(tuple(clusters), assignment)

    def copy(self) -> "PartitionState":
        dup = object.__new__(PartitionState)
        dup.catalog = self.catalog
        dup.members = [m.copy() for m in self.members]
        dup.boxes = self.boxes.copy()
        dup.velsums = self.velsums.copy()
        dup.split_plans = list(self.split_plans)
        return dup

    # -- mutations -----------------------------------------------------------

    def replace_with_children(self, k: int, left: np.ndarray, right: np.ndarray) -> None:
        """Replace cluster k in place with its two children (left first)."""
        self.members[k : k + 1] = [np.sort(left), np.sort(right)]
        self.boxes = np.insert(self.boxes, k + 1, 0.0, axis=0)
        self.velsums = np.insert(self.velsums, k + 1, 0.0)
        self.split_plans[k : k + 1] = [_STALE, _STALE]
        self._refresh(k)
        self._refresh(k + 1)

    def remove_cluster(self, k: int) -> None:
        del self.members[k]
        del self.split_plans[k]
        self.boxes = np.delete(self.boxes, k, axis=0)
        self.velsums = np.delete(self.velsums, k)

    def move_product(self, p: int, src: int, dst: int) -> bool:
        """Move product index p between clusters; True if src was emptied.

        The emptied source is left in place for the caller to remove so that
        candidate bookkeeping can renumber deterministically.
        """
        m = self.members[src]
        self.members[src] = m[m != p]
        d = self.members[dst]
        pos = int(np.searchsorted(d, p))
        self.members[dst] = np.insert(d, pos, p)
        self._refresh(dst)
        self.touch(src)
        self.touch(dst)
        if self.members[src].size == 0:
            return True
        self._refresh(src)
        return False

    def merge_pair(self, k1: int, k2: int) -> None:
        """Union cluster k2 into k1 and drop k2."""
        self.members[k1] = np.sort(
            np.concatenate([self.members[k1], self.members[k2]])
        )
        self.remove_cluster(k2)
        if k2 < k1:
            k1 -= 1
        self._refresh(k1)
        self.touch(k1)

    def set_assignment(self, assign: np.ndarray) -> list[int]:
        """Rebuild membership from an assignment vector.

        Emptied clusters are dropped (their old indices are returned); caches
        of clusters whose membership actually changed are recomputed and their
        split plans invalidated.
        """
        old_n = self.n_clusters
        order = np.argsort(assign, kind="stable")  # stable: segments stay index-sorted
        sorted_assign = assign[order]
        starts = np.searchsorted(sorted_assign, np.arange(old_n), side="left")
        ends = np.searchsorted(sorted_assign, np.arange(old_n), side="right")
        new_members: list[np.ndarray] = []
        new_plans: list = []
        keep_rows: list[int] = []
        dropped: list[int] = []
        for k in range(old_n):
            seg = order[starts[k] : ends[k]]
            if seg.size == 0:
                dropped.append(k)
                continue
            old = self.members[k]
            if old.size == seg.size and bool(np.array_equal(old, seg)):
                new_members.append(old)
                new_plans.append(self.split_plans[k])
            else:
                new_members.append(seg)
                new_plans.append(_STALE)
            keep_rows.append(k)
        self.members = new_members
        self.split_plans = new_plans
        self.boxes = self.boxes[keep_rows]
        self.velsums = self.velsums[keep_rows]
        for k, plan in enumerate(self.split_plans):
            if plan is _STALE:
                self._refresh(k)
        return dropped
