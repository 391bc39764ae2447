"""Core domain types and the volume arithmetic the solvers build on.

Dimensions are centimeters, velocities are (unitless) expected shipment
counts per period; everything is plain float64. All types are immutable
value snapshots once constructed and every operation is a pure function,
so instances can be shared freely between concurrent tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

AXES = ("length", "width", "height")


@dataclass(frozen=True, order=True)
class Dims:
    """Length/width/height triple. Components are finite and strictly > 0."""

    length: float
    width: float
    height: float

    def __post_init__(self) -> None:
        for name in AXES:
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"non-positive dimension: {name}={getattr(self, name)!r}")
            object.__setattr__(self, name, value)

    def volume(self) -> float:
        return self.length * self.width * self.height

    def canonical(self) -> "Dims":
        """The same triple sorted so length >= width >= height.

        Canonical triples compare per-dimension as if either operand could be
        rotated into any axis-aligned orientation.
        """
        a, b, c = sorted((self.length, self.width, self.height), reverse=True)
        return Dims(a, b, c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.length, self.width, self.height)


def fits(item: Dims, box: Dims, canonicalize: bool = False) -> bool:
    """True iff `item` fits in `box` comparing each axis separately.

    With canonicalize=True both operands are rotation-normalized first, which
    answers "can the item be rotated so that it fits".
    """
    if canonicalize:
        item = item.canonical()
        box = box.canonical()
    return (
        item.length <= box.length
        and item.width <= box.width
        and item.height <= box.height
    )


@dataclass(frozen=True)
class Product:
    """Catalog entry: opaque unique id, outer dimensions, sales velocity."""

    id: str
    dims: Dims
    velocity: float

    def __post_init__(self) -> None:
        value = float(self.velocity)
        if not (math.isfinite(value) and value >= 0.0):
            raise ValueError(f"negative velocity for product {self.id!r}: {self.velocity!r}")
        object.__setattr__(self, "velocity", value)


def tight_box(products: Sequence[Product]) -> Dims:
    """Smallest box fitting every product: the per-dimension maximum."""
    if not products:
        raise ValueError("empty cluster")
    return Dims(
        max(p.dims.length for p in products),
        max(p.dims.width for p in products),
        max(p.dims.height for p in products),
    )


class Catalog:
    """An immutable product collection plus the array views the solvers use.

    With canonicalize=True every product is stored with rotation-normalized
    dimensions, so downstream per-axis comparisons behave as rotation-aware.
    """

    def __init__(self, products: Iterable[Product], canonicalize: bool = False):
        items = list(products)
        if canonicalize:
            items = [Product(p.id, p.dims.canonical(), p.velocity) for p in items]
        seen: set[str] = set()
        for p in items:
            if p.id in seen:
                raise ValueError(f"duplicate product id {p.id!r}")
            seen.add(p.id)
        self.products: tuple[Product, ...] = tuple(items)
        self.canonicalized = bool(canonicalize)
        self.ids: list[str] = [p.id for p in items]
        self.index_of: dict[str, int] = {p.id: i for i, p in enumerate(items)}
        n = len(items)
        self.dims = np.array(
            [p.dims.as_tuple() for p in items], dtype=np.float64
        ).reshape(n, 3)
        self.velocities = np.array([p.velocity for p in items], dtype=np.float64)
        self.volumes = self.dims[:, 0] * self.dims[:, 1] * self.dims[:, 2]
        # rank of each product when ordered by id; used by deterministic tie rules
        order = sorted(range(n), key=self.ids.__getitem__)
        self.id_rank = np.zeros(n, dtype=np.intp)
        for rank, idx in enumerate(order):
            self.id_rank[idx] = rank

    def __len__(self) -> int:
        return len(self.products)

    def __iter__(self):
        return iter(self.products)

    def product(self, pid: str) -> Product:
        return self.products[self.index_of[pid]]


@dataclass(frozen=True)
class Cluster:
    """A non-empty product-id set with its tight box and cached velocity sum."""

    members: frozenset[str]
    box: Dims
    velocity_sum: float

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("empty cluster")
        object.__setattr__(self, "members", frozenset(self.members))
        if not (math.isfinite(self.velocity_sum) and self.velocity_sum >= 0.0):
            raise ValueError(f"negative velocity sum: {self.velocity_sum!r}")

    @classmethod
    def build(cls, products: Sequence[Product]) -> "Cluster":
        """Construct with the box and velocity sum derived from the members."""
        box = tight_box(products)
        velocity = math.fsum(p.velocity for p in products)
        return cls(frozenset(p.id for p in products), box, velocity)


def cluster_volume(cluster: Cluster) -> float:
    """Box volume times the member velocity sum (cm^3 * shipments)."""
    return cluster.box.volume() * cluster.velocity_sum


@dataclass(frozen=True)
class Solution:
    """A partition of the catalog into clusters plus the id -> cluster-index map."""

    clusters: tuple[Cluster, ...]
    assignment: Mapping[str, int]

    @classmethod
    def build(cls, catalog: Catalog, groups: Iterable[Iterable[str]]) -> "Solution":
        """Assemble clusters (tight boxes, velocity sums) from id groups."""
        clusters: list[Cluster] = []
        assignment: dict[str, int] = {}
        for k, group in enumerate(groups):
            ids = list(group)
            clusters.append(Cluster.build([catalog.product(pid) for pid in ids]))
            for pid in ids:
                if pid in assignment:
                    raise ValueError(f"product {pid!r} assigned twice")
                assignment[pid] = k
        if len(assignment) != len(catalog):
            raise ValueError(
                f"assignment not total: {len(catalog) - len(assignment)} products unassigned"
            )
        return cls(tuple(clusters), assignment)

    def validate(self, catalog: Catalog, rel_tol: float = 1e-9) -> None:
        """Raise AssertionError when a partition or cluster-cache invariant fails."""
        seen: set[str] = set()
        for k, cluster in enumerate(self.clusters):
            assert cluster.members, "empty cluster"
            rows = [catalog.product(pid).dims for pid in cluster.members]
            assert cluster.box.length == max(d.length for d in rows)
            assert cluster.box.width == max(d.width for d in rows)
            assert cluster.box.height == max(d.height for d in rows)
            vel = math.fsum(catalog.product(pid).velocity for pid in cluster.members)
            assert math.isclose(cluster.velocity_sum, vel, rel_tol=rel_tol, abs_tol=1e-12)
            for pid in cluster.members:
                assert self.assignment.get(pid) == k, f"assignment mismatch for {pid!r}"
                assert pid not in seen, f"product {pid!r} in two clusters"
                seen.add(pid)
        assert seen == set(catalog.ids), "assignment is not a total function"


def total_volume(solution: Solution) -> float:
    """Velocity-weighted shipment volume summed across all clusters."""
    return math.fsum(cluster_volume(c) for c in solution.clusters)


@dataclass(frozen=True)
class SolverConfig:
    """Pipeline settings.

    k is the target box count, k_tilde the backward-pass starting count and
    t_max the refinement iteration cap per invocation. `reassign` and
    `refine` switch those stages off entirely (the ablation variants);
    refine=False behaves like a zero iteration cap. `seed` only feeds
    synthetic-data generation.
    """

    k: int
    k_tilde: int
    t_max: int = 50
    canonicalize: bool = False
    seed: int = 0
    reassign: bool = True
    refine: bool = True

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.k_tilde < self.k:
            raise ValueError("k_tilde must be >= k")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
