"""Deterministic synthetic catalogs and shipment histories.

Stands in for real shipment data. Every distribution parameter is fixed by
the named profile, so a (n, seed, profile) triple always regenerates
byte-identical data:

* Shape families: a catalog holds ~n**0.45 prototype shapes (product lines:
  variants of the same flat pack, tube, cube, ...). A prototype draws a size
  mode (small/medium/large) with the profile's weights, a log-normal scale
  around the mode median and a per-axis log-normal aspect factor, so
  families range from cubes to elongated and flat shapes.
* Dimensions: each product picks a family and jitters the prototype by a
  small per-axis log-normal; values round to 0.01 cm. Within-family variants
  are near-duplicates while families differ strongly, which is what gives
  3D clustering something real to find.
* Velocities: a Pareto draw scaled by (median volume / product volume) **
  size_coupling, so small products ship disproportionately often. The
  catalog's velocity column is the observed train-period count.
* Shipments: three disjoint periods (train/valid/test); per-period counts
  are Poisson around rate x period_factor with log-normal period noise,
  zero-count rows omitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evaluation import ShipmentRecord
from .model import Catalog, Dims, Product

PERIODS = ("train", "valid", "test")


@dataclass(frozen=True)
class Profile:
    mode_weights: tuple[float, float, float]
    mode_medians: tuple[float, float, float]  # cm
    mode_sigma: float       # log-sd of the family size scale
    aspect_sigma: float     # log-sd of family per-axis aspect factors
    jitter_sigma: float     # log-sd of within-family per-axis jitter
    velocity_alpha: float   # Pareto tail index of the base rate
    velocity_scale: float
    size_coupling: float    # exponent tying rate to inverse volume
    period_sigma: float     # log-sd of per-period demand noise
    period_factor: float    # expected shipments per unit rate per period


PROFILES: dict[str, Profile] = {
    # heavy small-box usage: most shipments fall in the bottom volume half,
    # with families diverse in shape so volume-only grouping stays weak
    "skewed": Profile(
        mode_weights=(0.55, 0.33, 0.12),
        mode_medians=(7.0, 16.0, 38.0),
        mode_sigma=0.35,
        aspect_sigma=0.50,
        jitter_sigma=0.10,
        velocity_alpha=2.2,
        velocity_scale=2.0,
        size_coupling=0.70,
        period_sigma=0.20,
        period_factor=1.0,
    ),
    # no size/velocity coupling; useful as a null comparison
    "uniform": Profile(
        mode_weights=(0.34, 0.33, 0.33),
        mode_medians=(10.0, 20.0, 40.0),
        mode_sigma=0.35,
        aspect_sigma=0.35,
        jitter_sigma=0.12,
        velocity_alpha=2.5,
        velocity_scale=3.0,
        size_coupling=0.0,
        period_sigma=0.20,
        period_factor=1.0,
    ),
}


def _family_count(n: int) -> int:
    return min(n, max(6, int(round(n ** 0.45))))


def _draw_universe(n: int, prof: Profile, rng) -> tuple[np.ndarray, np.ndarray]:
    """Dims matrix and per-product demand rates for one product universe."""
    n_families = _family_count(n)
    modes = rng.choice(3, size=n_families, p=prof.mode_weights)
    scale = np.array(prof.mode_medians)[modes] * rng.lognormal(
        0.0, prof.mode_sigma, n_families
    )
    prototypes = scale[:, None] * rng.lognormal(0.0, prof.aspect_sigma, (n_families, 3))

    family = rng.integers(0, n_families, size=n)
    dims = prototypes[family] * rng.lognormal(0.0, prof.jitter_sigma, (n, 3))
    dims = np.maximum(np.round(dims, 2), 0.01)
    volumes = dims[:, 0] * dims[:, 1] * dims[:, 2]

    base_rate = (1.0 + rng.pareto(prof.velocity_alpha, n)) * prof.velocity_scale
    reference = float(np.median(volumes))
    rate = base_rate * (reference / volumes) ** prof.size_coupling
    return dims, rate


def _period_counts(rate: np.ndarray, prof: Profile, prng) -> np.ndarray:
    lam = rate * prof.period_factor * prng.lognormal(0.0, prof.period_sigma, len(rate))
    return prng.poisson(lam)


def gen_synthetic(
    n: int, seed: int, profile: str
) -> tuple[Catalog, dict[str, list[ShipmentRecord]]]:
    """Catalog plus train/valid/test shipment draws, reproducible from the seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    try:
        prof = PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}") from None
    children = np.random.SeedSequence(seed).spawn(1 + len(PERIODS))
    dims, rate = _draw_universe(n, prof, np.random.default_rng(children[0]))

    counts = {
        period: _period_counts(rate, prof, np.random.default_rng(child))
        for period, child in zip(PERIODS, children[1:])
    }

    ids = [f"P{i + 1:06d}" for i in range(n)]
    products = [
        Product(ids[i], Dims(*dims[i].tolist()), float(counts["train"][i]))
        for i in range(n)
    ]
    catalog = Catalog(products)
    shipments = {
        period: [
            ShipmentRecord(ids[i], int(c))
            for i, c in enumerate(counts[period].tolist())
            if c >= 1
        ]
        for period in PERIODS
    }
    return catalog, shipments


def redraw_training(n: int, seed: int, profile: str, period_seed: int) -> Catalog:
    """The same product universe as gen_synthetic(n, seed, profile), with the
    velocity column observed over a fresh, disjoint training period.

    Supports the training-sensitivity protocol: distinct period_seeds act as
    non-overlapping months of history for one catalog.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    try:
        prof = PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}") from None
    children = np.random.SeedSequence(seed).spawn(1)
    dims, rate = _draw_universe(n, prof, np.random.default_rng(children[0]))
    counts = _period_counts(
        rate, prof, np.random.default_rng(np.random.SeedSequence(period_seed))
    )
    products = [
        Product(f"P{i + 1:06d}", Dims(*dims[i].tolist()), float(counts[i]))
        for i in range(n)
    ]
    return Catalog(products)
