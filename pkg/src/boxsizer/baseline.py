"""Exact 1D dynamic-programming clustering on product volumes.

Products are projected to their scalar volumes, sorted, and partitioned into
K contiguous groups minimizing sum over groups of (max volume in group) x
(velocity sum in group). For this objective an optimal contiguous solution
always exists: swapping any two products across a group boundary can only
raise the larger group's max-volume term without lowering the other, so
restricting the search to contiguous runs loses nothing. Each group then
maps back to the 3D tight box over its members. O(N^2 K) time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Catalog, Dims, Solution


@dataclass
class BaselineResult:
    boxes: list[Dims]
    solution: Solution
    v_tilde: float


def dp_1d(catalog: Catalog, k: int) -> BaselineResult:
    """Optimal contiguous K-grouping of products in volume order.

    Equal volumes order by product id so the table, and hence the output, is
    deterministic. Raises when k exceeds the number of products.
    """
    n = len(catalog)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} products available")
    order = np.lexsort((catalog.id_rank, catalog.volumes))
    vols = catalog.volumes[order]
    pref = np.concatenate(([0.0], np.cumsum(catalog.velocities[order])))

    # cost of grouping products i..j-1 (sorted positions) is vols[j-1] * velocity sum
    cost_prev = np.full(n + 1, np.inf)
    cost_prev[0] = 0.0
    back = np.zeros((k + 1, n + 1), dtype=np.intp)
    for g in range(1, k + 1):
        cost_cur = np.full(n + 1, np.inf)
        for j in range(g, n - (k - g) + 1):
            lo = g - 1
            cand = cost_prev[lo:j] + vols[j - 1] * (pref[j] - pref[lo:j])
            i = int(np.argmin(cand))  # first min: smallest left boundary
            cost_cur[j] = float(cand[i])
            back[g, j] = lo + i
        cost_prev = cost_cur
    v_tilde = float(cost_prev[n])

    bounds = [n]
    for g in range(k, 0, -1):
        bounds.append(int(back[g, bounds[-1]]))
    bounds.reverse()
    ids = catalog.ids
    groups = [
        [ids[i] for i in order[bounds[g] : bounds[g + 1]].tolist()] for g in range(k)
    ]
    solution = Solution.build(catalog, groups)
    boxes = [c.box for c in solution.clusters]
    return BaselineResult(boxes, solution, v_tilde)
