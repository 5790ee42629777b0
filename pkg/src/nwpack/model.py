"""Geometric and radiological primitives: pool, box types, placements, dose.

All lengths are unitless integers (instance length-units); ``unit_scale``
converts length-units to meters for dose evaluation. Volumes are exact
64-bit integers, dose values are floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple


class ModelError(ValueError):
    """Invalid instance data (bad dimensions, oversize types, bad ids)."""


@dataclass(frozen=True)
class Pool:
    length: int
    width: int
    height: int
    unit_scale: float = 0.01  # meters per length-unit

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0 or self.height <= 0:
            raise ModelError(f"pool dimensions must be positive, got "
                             f"{self.length}x{self.width}x{self.height}")
        if self.unit_scale <= 0:
            raise ModelError(f"unit_scale must be positive, got {self.unit_scale}")

    @property
    def volume(self) -> int:
        return self.length * self.width * self.height


@dataclass(frozen=True)
class BoxType:
    id: int
    l: int
    w: int
    h: int
    count: int
    activity: float          # Bq
    gamma: float             # Sv*m^2 / (Bq*t)

    def __post_init__(self):
        if self.l <= 0 or self.w <= 0 or self.h <= 0:
            raise ModelError(f"box type {self.id}: dimensions must be positive")
        if self.count < 0:
            raise ModelError(f"box type {self.id}: count must be >= 0")
        if self.activity < 0 or self.gamma < 0:
            raise ModelError(f"box type {self.id}: activity and gamma must be >= 0")

    @property
    def volume(self) -> int:
        return self.l * self.w * self.h

    @property
    def dose_1m(self) -> float:
        """Dose rate of one box at 1 m: gamma * activity."""
        return self.gamma * self.activity


@dataclass(frozen=True)
class Placement:
    box_type_id: int
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class Instance:
    name: str
    pool: Pool
    box_types: Tuple[BoxType, ...]
    provenance: Optional[str] = None  # generator echo: "seed=... family=..."

    def __post_init__(self):
        ids = [t.id for t in self.box_types]
        if ids != list(range(len(ids))):
            raise ModelError(f"box type ids must be dense from 0, got {ids}")
        for t in self.box_types:
            if t.l > self.pool.length or t.w > self.pool.width or t.h > self.pool.height:
                raise ModelError(
                    f"box type {t.id} ({t.l}x{t.w}x{t.h}) does not fit pool "
                    f"{self.pool.length}x{self.pool.width}x{self.pool.height}")

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(t.count for t in self.box_types)

    def total_box_volume(self) -> int:
        return sum(t.volume * t.count for t in self.box_types)


@dataclass
class Layout:
    placements: List[Placement] = field(default_factory=list)


@dataclass(frozen=True)
class Violation:
    kind: str       # "bounds" | "overlap" | "count" | "unknown-type"
    detail: str


def dose_rate_single(gamma: float, activity: float, r: float) -> float:
    """Point dose rate at distance r meters: gamma * activity / r^2."""
    if r <= 0:
        raise ModelError(f"dose distance must be positive, got r={r}")
    return gamma * activity / (r * r)


def placement_dose(placement: Placement, box_type: BoxType, pool: Pool) -> float:
    """Dose rate of one placed box at the pool top.

    Distance is the vertical gap from the box center to the pool mouth,
    converted to meters; always positive for an in-bounds placement.
    """
    r_units = pool.height - (placement.z + box_type.h / 2.0)
    return dose_rate_single(box_type.gamma, box_type.activity,
                            r_units * pool.unit_scale)


def layout_metrics(layout: Layout, instance: Instance) -> Tuple[float, float]:
    """(utilization fraction, total dose Sv/t) of a valid layout."""
    report = validate_layout(layout, instance)
    if report:
        raise ModelError(f"invalid layout: {report[0].detail} "
                         f"({len(report)} violations)")
    placed = 0
    dose = 0.0
    for p in layout.placements:
        t = instance.box_types[p.box_type_id]
        placed += t.volume
        dose += placement_dose(p, t, instance.pool)
    return placed / instance.pool.volume, dose


def _boxes_intersect(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    # open-interior intersection of (x, y, z, l, w, h) cuboids
    return (a[0] < b[0] + b[3] and b[0] < a[0] + a[3] and
            a[1] < b[1] + b[4] and b[1] < a[1] + a[4] and
            a[2] < b[2] + b[5] and b[2] < a[2] + a[5])


def validate_layout(layout: Layout, instance: Instance) -> List[Violation]:
    """Independent audit: bounds, pairwise overlap, per-type count overrun.

    Returns every violation found; an empty list means the layout is valid.
    """
    pool = instance.pool
    out: List[Violation] = []
    regions = []
    used = [0] * len(instance.box_types)
    for i, p in enumerate(layout.placements):
        if not 0 <= p.box_type_id < len(instance.box_types):
            out.append(Violation("unknown-type",
                                 f"placement {i}: unknown box type {p.box_type_id}"))
            regions.append(None)
            continue
        t = instance.box_types[p.box_type_id]
        used[p.box_type_id] += 1
        if (p.x < 0 or p.y < 0 or p.z < 0 or
                p.x + t.l > pool.length or
                p.y + t.w > pool.width or
                p.z + t.h > pool.height):
            out.append(Violation("bounds",
                                 f"placement {i} (type {t.id} at {p.x},{p.y},{p.z}) "
                                 f"leaves the pool"))
        regions.append((p.x, p.y, p.z, t.l, t.w, t.h))
    for i in range(len(regions)):
        if regions[i] is None:
            continue
        for j in range(i + 1, len(regions)):
            if regions[j] is not None and _boxes_intersect(regions[i], regions[j]):
                out.append(Violation("overlap",
                                     f"placements {i} and {j} intersect"))
    for tid, n in enumerate(used):
        if n > instance.box_types[tid].count:
            out.append(Violation("count",
                                 f"type {tid}: {n} placed, only "
                                 f"{instance.box_types[tid].count} available"))
    return out
