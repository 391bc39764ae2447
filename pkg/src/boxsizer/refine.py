"""Product reassignment and one-move-at-a-time cluster refinement.

Reassignment sends every product to the fitting box of least volume in one
vectorized pass. Refinement repeatedly relocates a single boundary product
(one attaining its cluster's max length, width or height) wherever that
yields the largest positive drop in total volume; after the first full
O(C^2) candidate evaluation only pairs involving the two clusters touched
by the last move are re-evaluated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._state import PartitionState
from .model import Catalog, Solution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoveCandidate:
    """Relocation of one boundary product together with its volume gain."""

    product_id: str
    from_cluster: int
    to_cluster: int
    gain: float


# ---------------------------------------------------------------------------
# reassignment

def _reassign_pass(state: PartitionState) -> bool:
    """One sweep against the current (fixed) boxes; True when anything moved.

    Ties on box volume keep the product in its current cluster, otherwise the
    lowest cluster index wins. Clusters emptied by the sweep are dropped and
    all caches recomputed.
    """
    catalog = state.catalog
    n = len(catalog)
    assign = state.assignment_vector()
    box_vol = state.box_volumes()
    fit = (catalog.dims[:, None, :] <= state.boxes[None, :, :]).all(axis=2)
    options = np.where(fit, box_vol[None, :], np.inf)
    cheapest = options.min(axis=1)
    first = options.argmin(axis=1)
    current = options[np.arange(n), assign]
    new_assign = np.where(current == cheapest, assign, first)
    if not (new_assign != assign).any():
        return False
    dropped = state.set_assignment(new_assign)
    for k in dropped:
        logger.debug("cluster %d emptied by reassignment; removed", k)
    return True


def reassign_state(state: PartitionState) -> bool:
    """Snug-fit every product; returns True when any assignment changed.

    The O(NC) sweep repeats until stable: recomputing the tight boxes after a
    sweep can shrink a box enough to become some product's new cheapest fit,
    and the operation must be idempotent. Each sweep strictly shrinks the sum
    of chosen box volumes, so the loop terminates.
    """
    changed = False
    while _reassign_pass(state):
        changed = True
    return changed


def reassign_products(solution: Solution, catalog: Catalog) -> Solution:
    """Assign each product to the fitting cluster box of minimal volume.

    Total volume never increases; a repeated application returns the same
    solution (the snug assignment is a fixed point).
    """
    state = PartitionState.from_solution(solution, catalog)
    reassign_state(state)
    return state.to_solution()


# ---------------------------------------------------------------------------
# refinement

@dataclass
class _Tops:
    """Per cluster and axis: the max value, its multiplicity, the runner-up
    value and the member attaining the max (lowest product id on ties)."""

    top1: np.ndarray
    count1: np.ndarray
    top2: np.ndarray
    mover: np.ndarray


def _refresh_tops(state: PartitionState, tops: _Tops, k: int) -> None:
    catalog = state.catalog
    members = state.members[k]
    rows = catalog.dims[members]
    for a in range(3):
        vals = rows[:, a]
        top = vals.max()
        mask = vals == top
        rest = vals[~mask]
        tied = members[mask]
        tops.top1[k, a] = top
        tops.count1[k, a] = mask.sum()
        tops.top2[k, a] = rest.max() if rest.size else 0.0
        tops.mover[k, a] = tied[np.argmin(catalog.id_rank[tied])]


def _compute_tops(state: PartitionState) -> _Tops:
    c = state.n_clusters
    tops = _Tops(
        np.zeros((c, 3)), np.zeros((c, 3), dtype=np.intp),
        np.zeros((c, 3)), np.zeros((c, 3), dtype=np.intp),
    )
    for k in range(c):
        _refresh_tops(state, tops, k)
    return tops


def _move_gain(state: PartitionState, tops: _Tops, p: int, src: int, dst: int) -> float:
    """Drop in total volume if product p moves src -> dst.

    Source box shrinks to the runner-up value on every axis where p was the
    unique maximum; a source emptied by the move contributes zero volume.
    """
    catalog = state.catalog
    d = catalog.dims[p]
    s = float(catalog.velocities[p])
    base = state.cluster_volume(src) + state.cluster_volume(dst)
    if state.members[src].size == 1:
        src_after = 0.0
    else:
        nb = [0.0, 0.0, 0.0]
        for a in range(3):
            if d[a] == tops.top1[src, a] and tops.count1[src, a] == 1:
                nb[a] = tops.top2[src, a]
            else:
                nb[a] = tops.top1[src, a]
        src_after = float(nb[0] * nb[1] * nb[2] * (state.velsums[src] - s))
    grown = np.maximum(state.boxes[dst], d)
    dst_after = float(grown[0] * grown[1] * grown[2] * (state.velsums[dst] + s))
    return base - (src_after + dst_after)


def _cluster_movers(tops: _Tops, src: int) -> list[int]:
    movers: list[int] = []
    for a in range(3):
        p = int(tops.mover[src, a])
        if p not in movers:
            movers.append(p)
    return movers


def _pair_best(state: PartitionState, tops: _Tops, src: int, dst: int) -> tuple[float, int]:
    """Best (gain, mover) for the ordered pair; axis order breaks gain ties."""
    best_gain = -np.inf
    best_p = -1
    for p in _cluster_movers(tops, src):
        gain = _move_gain(state, tops, p, src, dst)
        if gain > best_gain:
            best_gain = gain
            best_p = p
    return best_gain, best_p


def evaluate_moves(solution: Solution, catalog: Catalog) -> list[MoveCandidate]:
    """All boundary-product relocation candidates with their gains.

    At most three products per source cluster (the per-axis maxima) times
    every other destination, i.e. at most 3(C-1)C entries.
    """
    if len(solution.clusters) < 2:
        raise ValueError("need at least two clusters to evaluate moves")
    state = PartitionState.from_solution(solution, catalog)
    tops = _compute_tops(state)
    out: list[MoveCandidate] = []
    for src in range(state.n_clusters):
        movers = _cluster_movers(tops, src)
        for dst in range(state.n_clusters):
            if dst == src:
                continue
            for p in movers:
                gain = _move_gain(state, tops, p, src, dst)
                out.append(MoveCandidate(catalog.ids[p], src, dst, gain))
    return out


def _fill_matrices(state, tops, gain_m, mover_m) -> None:
    c = state.n_clusters
    for src in range(c):
        for dst in range(c):
            if src != dst:
                gain_m[src, dst], mover_m[src, dst] = _pair_best(state, tops, src, dst)


def refine_state(
    state: PartitionState,
    t_max: int,
    incremental: bool = True,
    moves: list | None = None,
) -> int:
    """Apply max-gain single-product moves while the gain is positive.

    Stops after t_max applied moves or when every candidate would increase
    total volume. Ties resolve by lowest source index, lowest destination
    index, axis order, lowest product id. With incremental=False the whole
    candidate matrix is rebuilt every iteration (the reference behaviour the
    incremental bookkeeping must reproduce move for move).
    """
    applied = 0
    if state.n_clusters < 2:
        return 0
    tops = _compute_tops(state)
    c = state.n_clusters
    gain_m = np.full((c, c), -np.inf)
    mover_m = np.full((c, c), -1, dtype=np.intp)
    _fill_matrices(state, tops, gain_m, mover_m)
    while applied < t_max:
        flat = int(np.argmax(gain_m))  # row-major first max: (src, dst) lexicographic
        src, dst = divmod(flat, state.n_clusters)
        if not gain_m[src, dst] > 0.0:
            break
        p = int(mover_m[src, dst])
        emptied = state.move_product(p, src, dst)
        applied += 1
        if moves is not None:
            moves.append((state.catalog.ids[p], src, dst))
        if emptied:
            state.remove_cluster(src)
            logger.debug("cluster %d emptied by refinement move; removed", src)
            if state.n_clusters < 2:
                break
            tops = _compute_tops(state)
            c = state.n_clusters
            gain_m = np.full((c, c), -np.inf)
            mover_m = np.full((c, c), -1, dtype=np.intp)
            _fill_matrices(state, tops, gain_m, mover_m)
            continue
        if incremental:
            _refresh_tops(state, tops, src)
            _refresh_tops(state, tops, dst)
            for k in range(state.n_clusters):
                for t in (src, dst):
                    if k != t:
                        gain_m[k, t], mover_m[k, t] = _pair_best(state, tops, k, t)
                        gain_m[t, k], mover_m[t, k] = _pair_best(state, tops, t, k)
        else:
            tops = _compute_tops(state)
            _fill_matrices(state, tops, gain_m, mover_m)
    return applied


def iterative_refinement(solution: Solution, catalog: Catalog, t_max: int) -> Solution:
    """Greedy single-product relocation until no move helps (or t_max)."""
    if len(solution.clusters) < 2:
        raise ValueError("need at least two clusters to refine")
    state = PartitionState.from_solution(solution, catalog)
    refine_state(state, t_max)
    return state.to_solution()
