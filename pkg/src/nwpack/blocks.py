"""Block generation: simple arrays of one box type, then pairwise directional
concatenation under the cross-section dominance rules, capped at max_num and
filtered by min_fill_rate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from . import kernels
from .model import Instance

Direction = str  # "x" | "y" | "z"


@dataclass(frozen=True)
class SimpleArray:
    """nx x ny x nz array of identical boxes; box dims are carried so the
    composition tree is self-contained."""
    box_type_id: int
    l: int
    w: int
    h: int
    nx: int
    ny: int
    nz: int


@dataclass(frozen=True)
class Composite:
    child_a: "Block"
    child_b: "Block"
    direction: Direction
    offset_of_b: Tuple[int, int, int]


@dataclass(frozen=True)
class Block:
    dims: Tuple[int, int, int]
    net_volume: int                      # sum of contained box volumes
    dose_1m: float                       # sum of gamma*activity over boxes
    required: Tuple[Tuple[int, int], ...]  # (type_id, count), sorted by type
    composition: Union[SimpleArray, Composite]

    @property
    def bound_volume(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    @property
    def waste_volume(self) -> int:
        return self.bound_volume - self.net_volume

    @property
    def fill_rate(self) -> float:
        return self.net_volume / self.bound_volume

    def box_count(self) -> int:
        return sum(c for _, c in self.required)

    def key(self) -> Tuple:
        """Dedup key: dims, sorted requirement counts, dose to 12 significant digits."""
        return (self.dims,
                tuple(sorted(c for _, c in self.required)),
                "%.12g" % self.dose_1m)


@dataclass(frozen=True)
class BlockGenConfig:
    max_num: int = 10_000
    min_fill_rate: float = 0.98

    def __post_init__(self):
        if self.max_num < 1:
            raise ValueError("max_num must be >= 1")
        if not 0 < self.min_fill_rate <= 1:
            raise ValueError("min_fill_rate must be in (0, 1]")


@dataclass(frozen=True)
class Rejection:
    reason: str  # dominance-violated | oversize | inventory-infeasible | fill-rate-too-low


def _merge_required(a, b) -> Tuple[Tuple[int, int], ...]:
    m: Dict[int, int] = {}
    for t, c in a:
        m[t] = m.get(t, 0) + c
    for t, c in b:
        m[t] = m.get(t, 0) + c
    return tuple(sorted(m.items()))


def _combined_geometry(b1: Block, b2: Block, direction: Direction):
    l1, w1, h1 = b1.dims
    l2, w2, h2 = b2.dims
    if direction == "x":
        dominance = w1 * h1 >= w2 * h2
        dims = (l1 + l2, max(w1, w2), max(h1, h2))
        offset = (l1, 0, 0)
    elif direction == "y":
        dominance = l1 * h1 >= l2 * h2
        dims = (max(l1, l2), w1 + w2, max(h1, h2))
        offset = (0, w1, 0)
    elif direction == "z":
        dominance = l1 * w1 >= l2 * w2
        dims = (max(l1, l2), max(w1, w2), h1 + h2)
        offset = (0, 0, h1)
    else:
        raise ValueError(f"direction must be x, y or z, got {direction!r}")
    return dominance, dims, offset


def _build_composite(b1, b2, direction, dims, offset):
    return Block(
        dims=dims,
        net_volume=b1.net_volume + b2.net_volume,
        dose_1m=b1.dose_1m + b2.dose_1m,
        required=_merge_required(b1.required, b2.required),
        composition=Composite(b1, b2, direction, offset),
    )


def combine(b1: Block, b2: Block, direction: Direction,
            instance: Instance, config: BlockGenConfig) -> Union[Block, Rejection]:
    """Concatenate b2 after b1 along a direction.

    Gates in order: cross-section dominance, pool admissibility of the
    bounding box, inventory feasibility, minimum fill rate. Returns the
    composite block or a Rejection naming the first failed gate.
    """
    dominance, dims, offset = _combined_geometry(b1, b2, direction)
    if not dominance:
        return Rejection("dominance-violated")
    pool = instance.pool
    if dims[0] > pool.length or dims[1] > pool.width or dims[2] > pool.height:
        return Rejection("oversize")
    required = _merge_required(b1.required, b2.required)
    for t, c in required:
        if c > instance.box_types[t].count:
            return Rejection("inventory-infeasible")
    net = b1.net_volume + b2.net_volume
    if net / (dims[0] * dims[1] * dims[2]) < config.min_fill_rate:
        return Rejection("fill-rate-too-low")
    return _build_composite(b1, b2, direction, dims, offset)


def _combine_fast(b1, b2, direction, counts, pool, min_fill) -> Optional[Block]:
    # same accept set as combine(); cheap gates first, no reason reporting
    dominance, dims, offset = _combined_geometry(b1, b2, direction)
    if not dominance:
        return None
    if dims[0] > pool.length or dims[1] > pool.width or dims[2] > pool.height:
        return None
    net = b1.net_volume + b2.net_volume
    if net / (dims[0] * dims[1] * dims[2]) < min_fill:
        return None
    required = _merge_required(b1.required, b2.required)
    for t, c in required:
        if c > counts[t]:
            return None
    return _build_composite(b1, b2, direction, dims, offset)


def simple_block(box_type, nx: int, ny: int, nz: int) -> Block:
    n = nx * ny * nz
    return Block(
        dims=(nx * box_type.l, ny * box_type.w, nz * box_type.h),
        net_volume=n * box_type.volume,
        dose_1m=n * box_type.dose_1m,
        required=((box_type.id, n),),
        composition=SimpleArray(box_type.id, box_type.l, box_type.w,
                                box_type.h, nx, ny, nz),
    )


def generate_simple_blocks(instance: Instance) -> List[Block]:
    """Every nx x ny x nz array of one type that fits the pool and inventory,
    sorted by (volume desc, type id, nx, ny, nz)."""
    pool = instance.pool
    out = []
    for t in instance.box_types:
        if t.count == 0:
            continue
        max_nx = min(t.count, pool.length // t.l)
        max_ny = min(t.count, pool.width // t.w)
        max_nz = min(t.count, pool.height // t.h)
        for nx in range(1, max_nx + 1):
            for ny in range(1, max_ny + 1):
                if nx * ny > t.count:
                    break
                for nz in range(1, max_nz + 1):
                    if nx * ny * nz > t.count:
                        break
                    out.append((simple_block(t, nx, ny, nz), nx, ny, nz))
    out.sort(key=lambda e: (-e[0].net_volume, e[0].composition.box_type_id,
                            e[1], e[2], e[3]))
    return [e[0] for e in out]


def generate_blocks(instance: Instance, config: BlockGenConfig,
                    meter=None) -> List[Block]:
    """Full block list: simple blocks, then rounds of pairwise concatenation
    until max_num is reached or a round adds nothing new.

    Deterministic: simple blocks in their sort order, then candidates in
    sweep order (current round's parents x full list x directions x,y,z).
    """
    if meter is None:
        meter = kernels.WorkMeter()
    counts = instance.counts
    pool = instance.pool
    min_fill = config.min_fill_rate

    block_list: List[Block] = []
    seen = set()
    for b in generate_simple_blocks(instance):
        if len(block_list) >= config.max_num:
            break
        k = b.key()
        if k not in seen:
            seen.add(k)
            block_list.append(b)
    meter.add(len(block_list))

    plist = list(block_list)
    while plist and len(block_list) < config.max_num:
        snapshot = list(block_list)
        novel: List[Block] = []
        full = False
        for b1 in plist:
            for b2 in snapshot:
                for d in ("x", "y", "z"):
                    meter.add(1)
                    c = _combine_fast(b1, b2, d, counts, pool, min_fill)
                    if c is None:
                        continue
                    k = c.key()
                    if k in seen:
                        continue
                    seen.add(k)
                    block_list.append(c)
                    novel.append(c)
                    meter.add(5)
                    if len(block_list) >= config.max_num:
                        full = True
                        break
                if full:
                    break
            if full:
                break
        if full or not novel:
            break
        plist = novel
    return block_list


def enumerate_boxes(block: Block) -> List[Tuple[int, Tuple[int, int, int]]]:
    """Flatten the composition tree to (type_id, absolute offset) per box."""
    out: List[Tuple[int, Tuple[int, int, int]]] = []
    _walk(block, 0, 0, 0, out)
    return out


def _walk(block: Block, ox: int, oy: int, oz: int, out):
    comp = block.composition
    if isinstance(comp, SimpleArray):
        for ix in range(comp.nx):
            for iy in range(comp.ny):
                for iz in range(comp.nz):
                    out.append((comp.box_type_id,
                                (ox + ix * comp.l, oy + iy * comp.w, oz + iz * comp.h)))
    else:
        _walk(comp.child_a, ox, oy, oz, out)
        dx, dy, dz = comp.offset_of_b
        _walk(comp.child_b, ox + dx, oy + dy, oz + dz, out)
