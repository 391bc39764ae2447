"""Cluster pair combination: the backward-pass primitive.

Every unordered pair is scored in O(1) from the cached boxes and velocity
sums; the pair whose union adds the least shipped volume wins, ties going
to the lexicographically smallest index pair.
"""

from __future__ import annotations

import numpy as np

from ._state import PartitionState
from .model import Cluster, Dims, Solution


def _pair_deltas(boxes: np.ndarray, velsums: np.ndarray) -> np.ndarray:
    """Volume increase for every cluster pair; lower triangle masked to +inf.

    Computed as (merged - own) * velocity per side so each term, hence the
    delta, is non-negative in floating point as well as exactly.
    """
    vols = boxes[:, 0] * boxes[:, 1] * boxes[:, 2]
    merged = np.maximum(boxes[:, None, :], boxes[None, :, :])
    merged_vol = merged[:, :, 0] * merged[:, :, 1] * merged[:, :, 2]
    delta = (merged_vol - vols[:, None]) * velsums[:, None] + (
        merged_vol - vols[None, :]
    ) * velsums[None, :]
    c = len(velsums)
    delta[np.tril_indices(c)] = np.inf
    return delta


def best_merge_pair(solution: Solution) -> tuple[int, int, float]:
    """The pair whose union increases total volume the least."""
    c = len(solution.clusters)
    if c < 2:
        raise ValueError("nothing to merge")
    boxes = np.array([cl.box.as_tuple() for cl in solution.clusters])
    velsums = np.array([cl.velocity_sum for cl in solution.clusters])
    delta = _pair_deltas(boxes, velsums)
    flat = int(np.argmin(delta))  # first min: smallest (k1, k2)
    k1, k2 = divmod(flat, c)
    return k1, k2, float(delta[k1, k2])


def combine_clusters(solution: Solution) -> Solution:
    """Replace the best pair with its union; cluster count drops by one."""
    k1, k2, _ = best_merge_pair(solution)
    a, b = solution.clusters[k1], solution.clusters[k2]
    union = Cluster(
        a.members | b.members,
        Dims(
            max(a.box.length, b.box.length),
            max(a.box.width, b.box.width),
            max(a.box.height, b.box.height),
        ),
        a.velocity_sum + b.velocity_sum,
    )
    clusters = list(solution.clusters)
    clusters[k1] = union
    del clusters[k2]
    assignment: dict[str, int] = {}
    for k, cl in enumerate(clusters):
        for pid in sorted(cl.members):
            assignment[pid] = k
    return Solution(tuple(clusters), assignment)


def merge_state(state: PartitionState) -> tuple[int, int]:
    """In-place combination of the best pair; returns the merged indices."""
    if state.n_clusters < 2:
        raise ValueError("nothing to merge")
    delta = _pair_deltas(state.boxes, state.velsums)
    flat = int(np.argmin(delta))
    k1, k2 = divmod(flat, state.n_clusters)
    state.merge_pair(k1, k2)
    return k1, k2
