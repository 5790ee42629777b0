"""Block scoring for a chosen space.

Score = (V(b) - V_loss(b, s) - V_waste(b)) / V(s) + alpha * A_nor(b), where
V_loss estimates the unfillable space volume via per-axis bounded
subset-sum extensions of the remaining boxes' dimensions, and A_nor is the
min-max normalized block dose at one meter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import kernels
from .blocks import Block, enumerate_boxes
from .model import Instance
from .spaces import Space, fits


@dataclass(frozen=True)
class ScoreParams:
    alpha: float
    dose_min: float
    dose_max: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.dose_min > self.dose_max:
            raise ValueError("dose_min must be <= dose_max")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Block], alpha: float) -> "ScoreParams":
        """Normalization population: the initial generated block list."""
        if blocks:
            doses = [b.dose_1m for b in blocks]
            return cls(alpha, min(doses), max(doses))
        return cls(alpha, 0.0, 0.0)

    def a_nor(self, dose_1m: float) -> float:
        if self.dose_max == self.dose_min:
            return 0.0
        return (dose_1m - self.dose_min) / (self.dose_max - self.dose_min)


class DimInventory:
    """Per-axis dimension multisets of the remaining boxes."""

    def __init__(self, type_dims: Sequence[Tuple[int, int, int]], counts: Sequence[int]):
        if len(type_dims) != len(counts):
            raise ValueError("type_dims and counts must have equal length")
        self.type_dims = [tuple(int(v) for v in d) for d in type_dims]
        self.counts = [int(c) for c in counts]
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_instance(cls, instance: Instance,
                      remaining: Sequence[int] = None) -> "DimInventory":
        dims = [(t.l, t.w, t.h) for t in instance.box_types]
        counts = list(instance.counts) if remaining is None else list(remaining)
        return cls(dims, counts)

    def reduced(self, required: Iterable[Tuple[int, int]]) -> "DimInventory":
        """Inventory after reserving a block's own boxes."""
        counts = list(self.counts)
        for t, c in required:
            counts[t] -= c
            if counts[t] < 0:
                raise ValueError(f"requirement exceeds inventory for type {t}")
        return DimInventory(self.type_dims, counts)

    def axis_multiset(self, axis: int) -> List[Tuple[int, int]]:
        """(value, count) pairs along one axis, value-sorted, zero counts kept out."""
        agg = {}
        for d, c in zip(self.type_dims, self.counts):
            if c > 0:
                agg[d[axis]] = agg.get(d[axis], 0) + c
        return sorted(agg.items())


def max_dim_combination(values_with_counts: Iterable[Tuple[int, int]],
                        capacity: int) -> int:
    """Max linear combination of dimension values not exceeding capacity."""
    pairs = list(values_with_counts)
    values = [v for v, _ in pairs]
    counts = [c for _, c in pairs]
    return kernels.max_combination(values, counts, capacity)


def v_loss(block: Block, space: Space, inventory: DimInventory) -> int:
    """Unfillable-volume estimate of placing the block in the space.

    Extensions use the inventory left after reserving the block's own boxes.
    """
    if not fits(block.dims, space):
        raise ValueError(f"block {block.dims} does not fit space {space}")
    inv = inventory.reduced(block.required)
    caps = (space.sl - block.dims[0], space.sw - block.dims[1],
            space.sh - block.dims[2])
    ext = [max_dim_combination(inv.axis_multiset(a), caps[a]) for a in range(3)]
    return (space.volume
            - (block.dims[0] + ext[0])
            * (block.dims[1] + ext[1])
            * (block.dims[2] + ext[2]))


def score_block(block: Block, space: Space, inventory: DimInventory,
                params: ScoreParams) -> float:
    vl = v_loss(block, space, inventory)
    return ((block.net_volume - vl - block.waste_volume) / float(space.volume)
            + params.alpha * params.a_nor(block.dose_1m))


def select_blocks(blocks: Sequence[Block], space: Space,
                  inventory: DimInventory, w: int,
                  params: ScoreParams) -> List[Block]:
    """Up to w feasible blocks in descending score order.

    The inventory is the state's remaining stock (counts plus per-type
    dims). Feasible: fits the space and requirement covered by the counts.
    Ties broken by volume desc, dose desc, generation index asc.
    """
    if w < 1:
        raise ValueError("w must be >= 1")
    scored = []
    for idx, b in enumerate(blocks):
        if not fits(b.dims, space):
            continue
        if any(c > inventory.counts[t] for t, c in b.required):
            continue
        scored.append((score_block(b, space, inventory, params), idx, b))
    scored.sort(key=lambda e: (-e[0], -e[2].net_volume, -e[2].dose_1m, e[1]))
    return [b for _, _, b in scored[:w]]


class BlockArrays:
    """Flat array view of a block list, the input format of the kernels."""

    def __init__(self, blocks: Sequence[Block], instance: Instance,
                 params: ScoreParams):
        n = len(blocks)
        self.blocks = list(blocks)
        self.instance = instance
        self.params = params
        self.dims = np.zeros((n, 3), dtype=np.int64)
        self.net = np.zeros(n, dtype=np.int64)
        self.bound = np.zeros(n, dtype=np.int64)
        self.dose = np.zeros(n, dtype=np.float64)
        req_indptr = np.zeros(n + 1, dtype=np.int64)
        req_type: List[int] = []
        req_cnt: List[int] = []
        box_indptr = np.zeros(n + 1, dtype=np.int64)
        box_ga: List[float] = []
        box_zc: List[float] = []
        types = instance.box_types
        for i, b in enumerate(blocks):
            self.dims[i] = b.dims
            self.net[i] = b.net_volume
            self.bound[i] = b.bound_volume
            self.dose[i] = b.dose_1m
            for t, c in b.required:
                req_type.append(t)
                req_cnt.append(c)
            req_indptr[i + 1] = len(req_type)
            for tid, (_, _, oz) in enumerate_boxes(b):
                bt = types[tid]
                box_ga.append(bt.gamma * bt.activity)
                box_zc.append(oz + bt.h / 2.0)
            box_indptr[i + 1] = len(box_ga)
        self.req_indptr = req_indptr
        self.req_type = np.array(req_type, dtype=np.int64)
        self.req_cnt = np.array(req_cnt, dtype=np.int64)
        self.box_indptr = box_indptr
        self.box_ga = np.array(box_ga, dtype=np.float64)
        self.box_zc = np.array(box_zc, dtype=np.float64)
        self.type_dims = np.array([(t.l, t.w, t.h) for t in types], dtype=np.int64)
        if self.dose.size and params.dose_max != params.dose_min:
            self.anor = (self.dose - params.dose_min) / (params.dose_max - params.dose_min)
        else:
            self.anor = np.zeros(n, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.blocks)

    def make_kernel(self, meter) -> "kernels.BlockKernel":
        pool = self.instance.pool
        return kernels.BlockKernel(
            meter, self.dims, self.net, self.bound, self.dose, self.anor,
            self.req_indptr, self.req_type, self.req_cnt,
            self.box_indptr, self.box_ga, self.box_zc,
            self.type_dims, (pool.length, pool.width, pool.height),
            pool.unit_scale)
