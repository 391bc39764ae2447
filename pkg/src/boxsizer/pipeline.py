"""Forward/backward passes, hyper-parameter tuning and elbow selection.

The forward pass grows one all-product cluster into k_tilde clusters by
repeated best splits; the backward pass merges back down, recording the
solution at every cluster count it passes through so a single run yields the
whole suite ladder. After each split or merge the products are reassigned to
their snug boxes, the boxes are refined by single-product moves, and
reassignment runs once more (each stage is individually switchable for the
ablation variants).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._state import PartitionState
from .merge import merge_state
from .model import Catalog, Dims, Solution, SolverConfig
from .refine import reassign_state, refine_state
from .split import apply_best_split_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StageRecord:
    stage: str
    clusters: int
    total_volume: float


@dataclass
class StageLog:
    """Cached cluster counts and volumes per pipeline stage, in run order."""

    records: list[StageRecord] = field(default_factory=list)

    def record(self, stage: str, state: PartitionState) -> None:
        self.records.append(StageRecord(stage, state.n_clusters, state.total_volume()))

    def as_rows(self) -> list[dict]:
        return [
            {"stage": r.stage, "clusters": r.clusters, "total_volume": r.total_volume}
            for r in self.records
        ]


@dataclass(frozen=True)
class KPoint:
    k: int
    total_volume: float
    xi: float


@dataclass(frozen=True)
class KCurve:
    """(K, volume, air percentage) samples, ascending in K."""

    entries: tuple[KPoint, ...]

    def __post_init__(self) -> None:
        ks = [e.k for e in self.entries]
        if sorted(set(ks)) != ks:
            raise ValueError("curve entries must be strictly increasing in K")


@dataclass(frozen=True)
class LadderEntry:
    solution: Solution
    boxes: tuple[Dims, ...]


@dataclass
class SolutionLadder:
    """Solutions per cluster count harvested from one backward pass."""

    entries: dict[int, LadderEntry]
    stage_log: "StageLog" = field(default_factory=StageLog)

    def ks(self) -> list[int]:
        return sorted(self.entries)

    def __getitem__(self, k: int) -> LadderEntry:
        return self.entries[k]


@dataclass
class ForwardResult:
    solution: Solution
    exhausted: bool
    stage_log: StageLog
    ladder: SolutionLadder | None = None


@dataclass
class SolveResult:
    boxes: list[Dims]
    solution: Solution
    stage_log: StageLog
    exhausted: bool


# ---------------------------------------------------------------------------
# pass internals (operate on one shared PartitionState)

def _forward_step(state: PartitionState, cfg: SolverConfig, log: StageLog) -> bool:
    if not apply_best_split_state(state):
        return False
    log.record("split", state)
    if cfg.reassign:
        reassign_state(state)
        log.record("reassign", state)
    if cfg.refine:
        refine_state(state, cfg.t_max)
        log.record("refine", state)
        if cfg.reassign:
            reassign_state(state)
            log.record("reassign", state)
    return True


def _forward_to(
    state: PartitionState,
    cfg: SolverConfig,
    k_tilde: int,
    log: StageLog,
    want: set[int] | None = None,
    snaps: dict[int, PartitionState] | None = None,
) -> bool:
    """Grow the partition to k_tilde clusters; True when splits ran out early.

    When requested, states are snapshotted at the cluster counts in `want`
    (latest occurrence wins; reassignment can shrink the count again).
    """
    if want and snaps is not None and state.n_clusters in want:
        snaps[state.n_clusters] = state.copy()
    steps = 0
    limit = 4 * k_tilde + 16  # reassignment may drop clusters; avoid livelock
    while state.n_clusters < k_tilde:
        steps += 1
        if steps > limit:
            logger.warning(
                "forward pass stalled at %d clusters (target %d); stopping",
                state.n_clusters,
                k_tilde,
            )
            return True
        if not _forward_step(state, cfg, log):
            return True
        if want and snaps is not None and state.n_clusters in want:
            snaps[state.n_clusters] = state.copy()
    return False


def _ladder_entry(state: PartitionState) -> LadderEntry:
    solution = state.to_solution()
    return LadderEntry(solution, tuple(c.box for c in solution.clusters))


def _backward_step(state: PartitionState, cfg: SolverConfig, log: StageLog) -> None:
    merge_state(state)
    log.record("merge", state)
    if cfg.reassign:
        reassign_state(state)
        log.record("reassign", state)
    if cfg.refine:
        refine_state(state, cfg.t_max)
        log.record("refine", state)
        if cfg.reassign:
            reassign_state(state)
            log.record("reassign", state)


def _backward_to(
    state: PartitionState,
    cfg: SolverConfig,
    k_min: int,
    log: StageLog,
    record: set[int],
) -> dict[int, LadderEntry]:
    """Merge down to k_min clusters, snapshotting the counts in `record`.

    The input state is recorded as-is at its own count (no extra
    reassign/refine sweep before the first merge).
    """
    ladder: dict[int, LadderEntry] = {}
    if state.n_clusters in record:
        ladder[state.n_clusters] = _ladder_entry(state)
    while state.n_clusters > k_min:
        _backward_step(state, cfg, log)
        if state.n_clusters in record:
            ladder[state.n_clusters] = _ladder_entry(state)
    return ladder


# ---------------------------------------------------------------------------
# public operations

def forward_pass(
    catalog: Catalog,
    k_tilde: int,
    t_max: int = 50,
    *,
    reassign: bool = True,
    refine: bool = True,
    record: Iterable[int] | None = None,
) -> ForwardResult:
    """Divisive phase: one all-product cluster split up to k_tilde clusters.

    If every remaining cluster is dimension-homogeneous before k_tilde is
    reached the pass stops early with `exhausted` set. Pass `record` to also
    collect a ladder of solutions at those cluster counts.
    """
    if k_tilde < 1:
        raise ValueError("k_tilde must be >= 1")
    cfg = SolverConfig(k=1, k_tilde=k_tilde, t_max=t_max, reassign=reassign, refine=refine)
    state = PartitionState.single_cluster(catalog)
    log = StageLog()
    log.record("init", state)
    want = set(record) if record is not None else None
    snaps: dict[int, PartitionState] = {}
    exhausted = _forward_to(state, cfg, k_tilde, log, want=want, snaps=snaps)
    if exhausted:
        logger.info(
            "forward pass exhausted at %d clusters (target %d)", state.n_clusters, k_tilde
        )
    ladder = None
    if want is not None:
        ladder = SolutionLadder(
            {c: _ladder_entry(s) for c, s in snaps.items()}, log
        )
    return ForwardResult(state.to_solution(), exhausted, log, ladder)


def backward_pass(
    solution: Solution,
    catalog: Catalog,
    k_min: int,
    t_max: int = 50,
    *,
    reassign: bool = True,
    refine: bool = True,
    record: Iterable[int] | None = None,
) -> SolutionLadder:
    """Agglomerative phase from the given solution down to k_min clusters.

    Records every cluster count from the start down to k_min (or just those
    in `record`); one pass therefore yields all the intermediate suites.
    """
    if k_min < 1:
        raise ValueError("k_min must be >= 1")
    state = PartitionState.from_solution(solution, catalog)
    cfg = SolverConfig(
        k=k_min,
        k_tilde=max(k_min, state.n_clusters),
        t_max=t_max,
        reassign=reassign,
        refine=refine,
    )
    log = StageLog()
    log.record("init", state)
    want = set(record) if record is not None else set(range(k_min, state.n_clusters + 1))
    entries = _backward_to(state, cfg, k_min, log, want)
    return SolutionLadder(entries, log)


def solve(catalog: Catalog, config: SolverConfig) -> SolveResult:
    """Forward to k_tilde clusters, then backward to k; returns the k tight boxes.

    With k_tilde == k the backward pass is a no-op. `exhausted` flags runs
    that ended with fewer clusters than requested (catalogs with fewer
    distinct dimension triples than k).
    """
    work = catalog
    if config.canonicalize and not catalog.canonicalized:
        work = Catalog(catalog.products, canonicalize=True)
    state = PartitionState.single_cluster(work)
    log = StageLog()
    log.record("init", state)
    exhausted = _forward_to(state, config, config.k_tilde, log)
    if state.n_clusters > config.k:
        _backward_to(state, config, config.k, log, record=set())
    solution = state.to_solution()
    boxes = [c.box for c in solution.clusters]
    return SolveResult(boxes, solution, log, exhausted or len(boxes) != config.k)


def tune_scan(
    train_catalog: Catalog,
    validation_shipments: Sequence,
    k: int,
    candidates: Iterable[int],
    t_max: int = 50,
    *,
    reassign: bool = True,
    refine: bool = True,
) -> list[tuple[int, float]]:
    """Validation air percentage for each backward-pass starting count.

    One forward pass to the largest candidate supplies the starting states;
    each candidate then runs its own backward pass to k and the resulting
    k-box suite is scored on the validation shipments.
    """
    from . import evaluation  # local import: evaluation depends on this module

    validation = list(validation_shipments)
    if not validation:
        raise ValueError("empty validation set")
    cands = sorted({int(c) for c in candidates})
    if not cands:
        raise ValueError("no candidate starting points")
    if cands[0] < k:
        raise ValueError("candidates must be >= k")
    cfg = SolverConfig(k=k, k_tilde=cands[-1], t_max=t_max, reassign=reassign, refine=refine)
    state = PartitionState.single_cluster(train_catalog)
    log = StageLog()
    log.record("init", state)
    snaps: dict[int, PartitionState] = {}
    _forward_to(state, cfg, cands[-1], log, want=set(cands), snaps=snaps)
    results: list[tuple[int, float]] = []
    for cand in cands:
        start = snaps.get(cand)
        if start is None:
            # count never materialized (splits exhausted or skipped over):
            # fall back to the closest snapshot below, else the final state
            below = [c for c in snaps if c < cand]
            start = snaps[max(below)] if below else state
        work = start.copy()
        sub_log = StageLog()
        _backward_to(work, cfg, k, sub_log, record=set())
        boxes = sorted(
            (Dims(*row) for row in work.boxes.tolist()),
            key=lambda d: (d.volume(), d.as_tuple()),
        )
        report = evaluation.evaluate(boxes, validation, train_catalog)
        results.append((cand, report.xi))
    return results


def tune_start(
    train_catalog: Catalog,
    validation_shipments: Sequence,
    k: int,
    candidates: Iterable[int],
    t_max: int = 50,
    *,
    reassign: bool = True,
    refine: bool = True,
) -> int:
    """The candidate starting count whose k-box suite minimizes validation air.

    Ties resolve to the smaller candidate.
    """
    scan = tune_scan(
        train_catalog, validation_shipments, k, candidates, t_max,
        reassign=reassign, refine=refine,
    )
    best_k, best_xi = scan[0]
    for cand, xi in scan[1:]:
        if xi < best_xi:
            best_k, best_xi = cand, xi
    return best_k


def elbow(curve: KCurve) -> int:
    """K at the largest discrete second difference of volume (ties: smaller K)."""
    pts = curve.entries
    if len(pts) < 3:
        raise ValueError("elbow needs at least 3 curve points")
    ks = [p.k for p in pts]
    if any(b - a != 1 for a, b in zip(ks, ks[1:])):
        raise ValueError("curve entries must have consecutive K")
    best_k = None
    best_val = -math.inf
    for i in range(1, len(pts) - 1):
        val = (pts[i - 1].total_volume - pts[i].total_volume) - (
            pts[i].total_volume - pts[i + 1].total_volume
        )
        if val > best_val:
            best_k, best_val = pts[i].k, val
    return best_k
