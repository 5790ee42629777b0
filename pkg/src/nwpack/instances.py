"""Benchmark families, instance generation, and the .inst/.sol text formats.

Families mirror the 16-set benchmark layout (type counts 1..100, pool
587x233x220, ~130-205 boxes per instance). The generator is deterministic
from the master seed and guarantees total box volume inside
[0.955, 1.045] x pool volume, so instances are knapsack-like.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .model import BoxType, Instance, Layout, ModelError, Placement, Pool, \
    layout_metrics, validate_layout

DEFAULT_POOL = (587, 233, 220)
DEFAULT_UNIT_SCALE = 0.01

# (family name, box type count, target boxes per instance)
FAMILY_TABLE: Dict[str, Tuple[int, int]] = {
    "set1": (1, 205), "set2": (3, 150), "set3": (5, 136), "set4": (8, 134),
    "set5": (10, 132), "set6": (12, 132), "set7": (15, 131), "set8": (20, 130),
    "set9": (30, 130), "set10": (40, 128), "set11": (50, 130),
    "set12": (60, 129), "set13": (70, 130), "set14": (80, 130),
    "set15": (90, 129), "set16": (100, 129),
}

FAMILY_NAMES = tuple(FAMILY_TABLE)

# dose-rate constants, Sv*m^2/(Bq*t); representative gamma emitters spanning
# the orders of magnitude found in packaged plant waste
NUCLIDE_GAMMA: Tuple[Tuple[str, float], ...] = (
    ("Co-60", 3.51e-13),
    ("Cs-134", 2.46e-13),
    ("Eu-154", 1.72e-13),
    ("Ir-192", 1.24e-13),
    ("Cs-137", 9.27e-14),
    ("Ba-133", 6.93e-14),
    ("Am-241", 8.48e-15),
    ("Kr-85", 3.40e-16),
)


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class FamilySpec:
    name: str
    type_count: int
    boxes_per_instance: int
    master_seed: int
    instances: int = 100
    pool_dims: Tuple[int, int, int] = DEFAULT_POOL
    unit_scale: float = DEFAULT_UNIT_SCALE
    dim_range: Tuple[int, int] = (25, 100)
    activity_range: Tuple[float, float] = (1e6, 1e12)
    nuclides: Tuple[Tuple[str, float], ...] = NUCLIDE_GAMMA

    def __post_init__(self):
        if self.type_count < 1:
            raise ValueError("type_count must be >= 1")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        lo, hi = self.dim_range
        if not (0 < lo <= hi):
            raise ValueError("bad dim_range")
        if hi > min(self.pool_dims):
            raise ValueError("dim_range exceeds pool dimensions")


def family_spec(name: str, master_seed: int, instances: int = 100,
                **overrides) -> FamilySpec:
    if name not in FAMILY_TABLE:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILY_TABLE)}")
    t, boxes = FAMILY_TABLE[name]
    return FamilySpec(name=name, type_count=t, boxes_per_instance=boxes,
                      master_seed=master_seed, instances=instances, **overrides)


# Minimum single-type pool tileability of a drawn box type. Waste containers
# are sized for the pool they go into; unconditioned uniform dims tile a
# 587x233x220 pool to only ~60-75%, which no packing algorithm can beat.
TILE_CEILING = 0.90


def _tiling_ceiling(dims: Tuple[int, int, int],
                    pool_dims: Tuple[int, int, int]) -> float:
    l, w, h = dims
    pl, pw, ph = pool_dims
    return ((pl // l) * l / pl) * ((pw // w) * w / pw) * ((ph // h) * h / ph)


def _draw_dims(rng: random.Random, spec: FamilySpec, pool_volume: int,
               band_hi: int) -> List[Tuple[int, int, int]]:
    lo, hi = spec.dim_range
    target = spec.boxes_per_instance
    while True:
        dims = []
        for _ in range(spec.type_count):
            while True:
                d = (rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(lo, hi))
                if _tiling_ceiling(d, spec.pool_dims) >= TILE_CEILING:
                    break
            dims.append(d)
        if spec.type_count == 1:
            v = dims[0][0] * dims[0][1] * dims[0][2]
            implied = round(pool_volume / v)
            if abs(implied - target) <= 0.15 * target:
                return dims
            continue
        if sum(l * w * h for l, w, h in dims) <= band_hi:
            return dims


def generate_instance(spec: FamilySpec, index: int) -> Instance:
    """One deterministic instance of the family."""
    rng = random.Random(f"{spec.master_seed}:{spec.name}:{index}")
    pl, pw, ph = spec.pool_dims
    pool_volume = pl * pw * ph
    band_lo = math.ceil(0.955 * pool_volume)
    band_hi = math.floor(1.045 * pool_volume)

    dims = _draw_dims(rng, spec, pool_volume, band_hi)
    vols = [l * w * h for l, w, h in dims]
    counts = [1] * spec.type_count
    total = sum(vols)
    boxes = spec.type_count
    target = spec.boxes_per_instance
    while total < band_lo:
        cands = [t for t in range(spec.type_count) if total + vols[t] <= band_hi]
        if boxes >= target:
            # over the box budget: finish with the largest boxes
            cands.sort(key=lambda t: (-vols[t], t))
            pick = cands[0]
        else:
            need = (band_lo - total) / (target - boxes)
            cands.sort(key=lambda t: (abs(vols[t] - need), t))
            pick = rng.choice(cands[:4])
        counts[pick] += 1
        total += vols[pick]
        boxes += 1

    log_lo, log_hi = (math.log(spec.activity_range[0]),
                      math.log(spec.activity_range[1]))
    types = []
    for tid in range(spec.type_count):
        activity = math.exp(rng.uniform(log_lo, log_hi))
        gamma = rng.choice(spec.nuclides)[1]
        l, w, h = dims[tid]
        types.append(BoxType(tid, l, w, h, counts[tid], activity, gamma))

    return Instance(
        name=f"{spec.name}-{index:04d}",
        pool=Pool(pl, pw, ph, spec.unit_scale),
        box_types=tuple(types),
        provenance=f"family={spec.name} index={index} seed={spec.master_seed}",
    )


def generate_family(spec: FamilySpec) -> List[Instance]:
    return [generate_instance(spec, i) for i in range(spec.instances)]


# ---------------------------------------------------------------------------
# instance text format (.inst)
# ---------------------------------------------------------------------------

def write_instance(instance: Instance) -> str:
    lines = [f"NAME {instance.name}"]
    if instance.provenance:
        lines.append(f"GEN {instance.provenance}")
    p = instance.pool
    lines.append(f"POOL {p.length} {p.width} {p.height} {p.unit_scale!r}")
    for t in instance.box_types:
        lines.append(f"TYPE {t.id} {t.l} {t.w} {t.h} {t.count} "
                     f"{t.activity!r} {t.gamma!r}")
    return "\n".join(lines) + "\n"


def _tokens(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line.split()


def _want(ln, parts, n, what):
    if len(parts) != n:
        raise ParseError(ln, f"{what} expects {n - 1} fields, got {len(parts) - 1}")


def _num(ln, tok, kind, what):
    try:
        return kind(tok)
    except ValueError:
        raise ParseError(ln, f"bad {what}: {tok!r}") from None


def read_instance(text: str) -> Instance:
    name = ""
    provenance = None
    pool = None
    types = {}
    for ln, parts in _tokens(text):
        tag = parts[0]
        if tag == "NAME":
            _want(ln, parts, 2, "NAME")
            name = parts[1]
        elif tag == "GEN":
            provenance = " ".join(parts[1:])
        elif tag == "POOL":
            _want(ln, parts, 5, "POOL")
            if pool is not None:
                raise ParseError(ln, "duplicate POOL line")
            pool = Pool(_num(ln, parts[1], int, "pool length"),
                        _num(ln, parts[2], int, "pool width"),
                        _num(ln, parts[3], int, "pool height"),
                        _num(ln, parts[4], float, "unit scale"))
        elif tag == "TYPE":
            _want(ln, parts, 8, "TYPE")
            tid = _num(ln, parts[1], int, "type id")
            if tid in types:
                raise ParseError(ln, f"duplicate type id {tid}")
            types[tid] = (ln, BoxType(
                tid,
                _num(ln, parts[2], int, "length"),
                _num(ln, parts[3], int, "width"),
                _num(ln, parts[4], int, "height"),
                _num(ln, parts[5], int, "count"),
                _num(ln, parts[6], float, "activity"),
                _num(ln, parts[7], float, "gamma")))
        else:
            raise ParseError(ln, f"unknown record {tag!r}")
    if pool is None:
        raise ParseError(0, "missing POOL line")
    ordered = [types[k][1] for k in sorted(types)]
    try:
        return Instance(name=name, pool=pool, box_types=tuple(ordered),
                        provenance=provenance)
    except ModelError as e:
        ln = min((v[0] for v in types.values()), default=0)
        raise ParseError(ln, str(e)) from None


# ---------------------------------------------------------------------------
# solution text format (.sol)
# ---------------------------------------------------------------------------

@dataclass
class SolutionRecord:
    instance_name: str
    alpha: float
    time_limit: float
    seed: int
    placements: List[Placement]
    utilization: float
    total_dose: float
    time: float  # deterministic budget time consumed by the solve

    def layout(self) -> Layout:
        return Layout(list(self.placements))


def write_solution(record: SolutionRecord) -> str:
    lines = [f"SOLUTION {record.instance_name}",
             f"CONFIG {record.alpha!r} {record.time_limit!r} {record.seed}"]
    for p in record.placements:
        lines.append(f"BOX {p.box_type_id} {p.x} {p.y} {p.z}")
    lines.append(f"METRICS {record.utilization!r} {record.total_dose!r} "
                 f"{record.time!r}")
    return "\n".join(lines) + "\n"


def read_solution(text: str) -> SolutionRecord:
    name = None
    config = None
    metrics = None
    placements: List[Placement] = []
    for ln, parts in _tokens(text):
        tag = parts[0]
        if tag == "SOLUTION":
            _want(ln, parts, 2, "SOLUTION")
            name = parts[1]
        elif tag == "CONFIG":
            _want(ln, parts, 4, "CONFIG")
            config = (_num(ln, parts[1], float, "alpha"),
                      _num(ln, parts[2], float, "time limit"),
                      _num(ln, parts[3], int, "seed"))
        elif tag == "BOX":
            _want(ln, parts, 5, "BOX")
            placements.append(Placement(
                _num(ln, parts[1], int, "type id"),
                _num(ln, parts[2], int, "x"),
                _num(ln, parts[3], int, "y"),
                _num(ln, parts[4], int, "z")))
        elif tag == "METRICS":
            _want(ln, parts, 4, "METRICS")
            metrics = (_num(ln, parts[1], float, "utilization"),
                       _num(ln, parts[2], float, "total dose"),
                       _num(ln, parts[3], float, "time"))
        else:
            raise ParseError(ln, f"unknown record {tag!r}")
    if name is None:
        raise ParseError(0, "missing SOLUTION line")
    if config is None:
        raise ParseError(0, "missing CONFIG line")
    if metrics is None:
        raise ParseError(0, "missing METRICS line")
    return SolutionRecord(name, config[0], config[1], config[2],
                          placements, metrics[0], metrics[1], metrics[2])


def _rel_close(a: float, b: float, tol: float = 1e-9) -> bool:
    if a == b:
        return True
    return abs(a - b) <= tol * max(abs(a), abs(b))


def audit_solution(record: SolutionRecord, instance: Instance) -> List[str]:
    """Violation listing: empty means the solution is valid and its stored
    metrics match an independent recomputation within 1e-9 relative."""
    problems = []
    if record.instance_name != instance.name:
        problems.append(f"solution names instance {record.instance_name!r}, "
                        f"file is {instance.name!r}")
    layout = record.layout()
    report = validate_layout(layout, instance)
    problems.extend(f"{v.kind}: {v.detail}" for v in report)
    if not report and all(0 <= p.box_type_id < len(instance.box_types)
                          for p in record.placements):
        util, dose = layout_metrics(layout, instance)
        if not _rel_close(util, record.utilization):
            problems.append(f"utilization mismatch: stored {record.utilization!r}, "
                            f"recomputed {util!r}")
        if not _rel_close(dose, record.total_dose):
            problems.append(f"total dose mismatch: stored {record.total_dose!r}, "
                            f"recomputed {dose!r}")
    return problems
