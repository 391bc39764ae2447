"""Shipment simulation and the air-in-box metric.

Each shipment is placed in the minimal-volume box that fits its product.
With P the total product volume and V the total box volume over the fitted
shipments, the air percentage is 100 * (1 - P / V), which lives in [0, 100)
and ranks box suites identically to V on a fixed shipment set. Shipments of
the same product are aggregated before any arithmetic, so splitting a count
into single-count records cannot change a single output digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import Catalog, Dims
from .pipeline import KCurve, KPoint, SolutionLadder


@dataclass(frozen=True)
class ShipmentRecord:
    """One catalog product shipped `count` times in the period."""

    product_id: str
    count: int

    def __post_init__(self) -> None:
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"shipment count must be a positive integer, got {self.count!r}")
        object.__setattr__(self, "count", int(self.count))


@dataclass(frozen=True)
class BoxUsage:
    box: Dims
    shipment_share: float
    volume_share: float


@dataclass(frozen=True)
class EvalReport:
    """Air metric plus per-box share distributions for one shipment set."""

    total_product_volume: float
    total_box_volume: float
    xi: float
    per_box: tuple[BoxUsage, ...]
    unfittable: tuple[tuple[str, int], ...]
    fitted_shipments: int
    oversize_box: Dims | None = None


def _aggregate(shipments: Iterable[ShipmentRecord], catalog: Catalog) -> dict[int, int]:
    counts: dict[int, int] = {}
    for rec in shipments:
        idx = catalog.index_of.get(rec.product_id)
        if idx is None:
            raise ValueError(f"unknown product id {rec.product_id!r}")
        counts[idx] = counts.get(idx, 0) + rec.count
    return counts


def evaluate(
    boxes: Sequence[Dims],
    shipments: Iterable[ShipmentRecord],
    catalog: Catalog,
    *,
    oversize_box: bool = False,
) -> EvalReport:
    """Simulate the shipments in the given box suite, snug fit first.

    Ties on box volume pick the earlier box in the list. Shipments fitting no
    box are excluded from P, V and the air percentage and reported in
    `unfittable`; with oversize_box=True the report additionally carries the
    tight box that would cover them.
    """
    box_list = list(boxes)
    if not box_list:
        raise ValueError("boxes must be non-empty")
    counts = _aggregate(shipments, catalog)
    if not counts:
        raise ValueError("no fitted shipments")
    prod_idx = np.fromiter(counts.keys(), dtype=np.intp, count=len(counts))
    cnt = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
    box_arr = np.array([b.as_tuple() for b in box_list])
    box_vol = box_arr[:, 0] * box_arr[:, 1] * box_arr[:, 2]
    fit = (catalog.dims[prod_idx][:, None, :] <= box_arr[None, :, :]).all(axis=2)
    options = np.where(fit, box_vol[None, :], np.inf)
    chosen = options.argmin(axis=1)
    fitted = fit.any(axis=1)
    if not fitted.any():
        raise ValueError("no fitted shipments")
    product_vol = catalog.volumes[prod_idx]
    chosen_vol = box_vol[chosen]
    p_total = math.fsum((product_vol[fitted] * cnt[fitted]).tolist())
    v_total = math.fsum((chosen_vol[fitted] * cnt[fitted]).tolist())
    xi = 100.0 * (1.0 - p_total / v_total)
    total_count = int(cnt[fitted].sum())
    per_box = []
    for b in range(len(box_list)):
        mask = fitted & (chosen == b)
        share = 100.0 * float(cnt[mask].sum()) / total_count
        vol_share = 100.0 * math.fsum((chosen_vol[mask] * cnt[mask]).tolist()) / v_total
        per_box.append(BoxUsage(box_list[b], share, vol_share))
    unfittable = tuple(
        (catalog.ids[i], counts[i]) for i in prod_idx[~fitted].tolist()
    )
    oversize = None
    if oversize_box and unfittable:
        rows = catalog.dims[prod_idx[~fitted]]
        top = rows.max(axis=0)
        oversize = Dims(float(top[0]), float(top[1]), float(top[2]))
    return EvalReport(
        p_total, v_total, xi, tuple(per_box), unfittable, total_count, oversize
    )


def weighted_air(
    boxes: Sequence[Dims], catalog: Catalog, weights: np.ndarray | None = None
) -> tuple[float, float, float]:
    """(P, V, air %) weighting each product by its velocity instead of counts.

    This is the training-set version of the metric: products that fit no box
    are ignored, zero-velocity products contribute nothing.
    """
    box_list = list(boxes)
    if not box_list:
        raise ValueError("boxes must be non-empty")
    w = catalog.velocities if weights is None else np.asarray(weights, dtype=np.float64)
    box_arr = np.array([b.as_tuple() for b in box_list])
    box_vol = box_arr[:, 0] * box_arr[:, 1] * box_arr[:, 2]
    fit = (catalog.dims[:, None, :] <= box_arr[None, :, :]).all(axis=2)
    options = np.where(fit, box_vol[None, :], np.inf)
    chosen = options.argmin(axis=1)
    fitted = fit.any(axis=1)
    p_total = math.fsum((catalog.volumes[fitted] * w[fitted]).tolist())
    v_total = math.fsum((box_vol[chosen[fitted]] * w[fitted]).tolist())
    if v_total == 0.0:
        raise ValueError("no shipped volume")
    return p_total, v_total, 100.0 * (1.0 - p_total / v_total)


def k_sweep(
    ladder: SolutionLadder, shipments: Iterable[ShipmentRecord], catalog: Catalog
) -> KCurve:
    """Evaluate every ladder suite on one shipment set; returns the K curve."""
    if not ladder.entries:
        raise ValueError("empty ladder")
    shipment_list = list(shipments)
    points = []
    for k in sorted(ladder.entries):
        entry = ladder.entries[k]
        boxes = sorted(entry.boxes, key=lambda d: (d.volume(), d.as_tuple()))
        report = evaluate(boxes, shipment_list, catalog)
        points.append(KPoint(k, report.total_box_volume, report.xi))
    return KCurve(tuple(points))
