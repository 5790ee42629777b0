"""Restarting beam search over packing states.

Each restart runs a beam of the current effective width: the root is
expanded with w_eff^2 successors, deeper states with w_eff, every successor
is evaluated by a width-1 greedy rollout (which also maintains the
incumbent), and the top w_eff rollout scores survive to the next level.
When the beam empties the width grows by sqrt(2) and the search restarts,
until the budget is consumed.

The budget is a deterministic work-unit clock: the time limit in seconds is
converted to kernel work units via a calibrated rate, so identical inputs
give identical outputs regardless of machine load, parallelism or backend.
Real wall time tracks the budget approximately (see units_per_second).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .blocks import Block, BlockGenConfig, enumerate_boxes, generate_blocks
from .model import Instance, Layout, Placement
from .scoring import BlockArrays, ScoreParams

# Work units consumed per second of time limit. Calibrated on the reference
# machine with the compiled backend so that real wall time stays under the
# nominal limit (the pure-Python backend is slower in real time but consumes
# the same budget and returns the same result).
DEFAULT_UNITS_PER_SECOND = 3_000_000

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SearchConfig:
    time_limit: float = 30.0
    alpha: float = 0.6
    max_blocks: int = 10_000
    min_fill_rate: float = 0.98
    seed: int = 0  # provenance echo only; the search has no randomness
    units_per_second: float = DEFAULT_UNITS_PER_SECOND

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.units_per_second <= 0:
            raise ValueError("units_per_second must be positive")

    def gen_config(self) -> BlockGenConfig:
        return BlockGenConfig(self.max_blocks, self.min_fill_rate)


@dataclass
class BlockSet:
    """A generated block list plus the work charged for generating it."""
    blocks: List[Block]
    gen_work: int
    gen_config: BlockGenConfig


def prepare_blocks(instance: Instance, gen_config: BlockGenConfig) -> BlockSet:
    meter = kernels.WorkMeter()
    blocks = generate_blocks(instance, gen_config, meter)
    return BlockSet(blocks, meter.work, gen_config)


class SearchState:
    """Partial packing: remaining inventory, live blocks, spaces, placements."""

    __slots__ = ("remaining", "live", "spaces", "placements",
                 "placed_volume", "total_dose", "score")

    def __init__(self, remaining, live, spaces, placements,
                 placed_volume, total_dose):
        self.remaining = remaining          # np.int64 (T,)
        self.live = live                    # np.int64 block indices
        self.spaces = spaces                # kernels.SpaceBuffer
        self.placements = placements        # [(block_index, x, y, z)]
        self.placed_volume = placed_volume
        self.total_dose = total_dose
        self.score = None

    def copy(self) -> "SearchState":
        return SearchState(self.remaining.copy(), self.live,
                           self.spaces.copy(), list(self.placements),
                           self.placed_volume, self.total_dose)


@dataclass
class SearchResult:
    instance: Instance
    config: SearchConfig
    placements: List[Tuple[Block, int, int, int]]
    placed_volume: int
    utilization: float
    total_dose: float
    restarts: int
    final_width: int
    evaluations: int
    work_units: int
    budget_units: int
    budget_time: float   # deterministic: consumed units / units_per_second
    wall_time: float     # real, informational only

    def to_layout(self) -> Layout:
        out = []
        for block, x, y, z in self.placements:
            for tid, (ox, oy, oz) in enumerate_boxes(block):
                out.append(Placement(tid, x + ox, y + oy, z + oz))
        return Layout(out)


def incumbent_compare(cand_volume: int, cand_dose: float,
                      inc_volume: int, inc_dose: float) -> bool:
    """True when the candidate should replace the incumbent:
    strictly more volume, or equal volume with strictly less dose."""
    if cand_volume != inc_volume:
        return cand_volume > inc_volume
    return cand_dose < inc_dose


def effective_width(w: float) -> int:
    return max(1, math.floor(w + 0.5))


class Engine:
    """One solver run bound to an instance, config and block list."""

    def __init__(self, instance: Instance, config: SearchConfig,
                 block_set: Optional[BlockSet] = None):
        self.instance = instance
        self.config = config
        if block_set is None:
            block_set = prepare_blocks(instance, config.gen_config())
        self.blocks = block_set.blocks
        self.meter = kernels.WorkMeter()
        self.meter.add(block_set.gen_work)
        self.params = ScoreParams.from_blocks(self.blocks, config.alpha)
        self.arrays = BlockArrays(self.blocks, instance, self.params)
        self.kernel = self.arrays.make_kernel(self.meter)
        self.budget = int(config.time_limit * config.units_per_second)
        if instance.box_types:
            self.min_dim = min(min(t.l, t.w, t.h) for t in instance.box_types)
        else:
            self.min_dim = 1
        self.evaluations = 0
        # incumbent: the empty layout is always valid
        self.best_placements: List[Tuple[int, int, int, int]] = []
        self.best_volume = 0
        self.best_dose = 0.0

    def initial_state(self) -> SearchState:
        pool = self.instance.pool
        remaining = np.array(self.instance.counts, dtype=np.int64)
        live = self.kernel.refilter(
            np.arange(len(self.blocks), dtype=np.int64), remaining)
        spaces = kernels.SpaceBuffer(
            self.meter, [(0, 0, 0, pool.length, pool.width, pool.height)])
        return SearchState(remaining, live, spaces, [], 0, 0.0)

    def _apply(self, state: SearchState, bi: int, sidx: int) -> None:
        x, y, z = state.spaces.anchor(sidx)
        d = self.arrays.dims[bi]
        state.spaces.update(sidx, int(d[0]), int(d[1]), int(d[2]), self.min_dim)
        for t, c in self.kernel.block_req(bi):
            state.remaining[t] -= c
        state.live = self.kernel.refilter(state.live, state.remaining)
        state.placed_volume += int(self.arrays.net[bi])
        state.total_dose += self.kernel.dose_at(bi, z)
        state.placements.append((bi, x, y, z))

    def place(self, state: SearchState, bi: int, sidx: int) -> SearchState:
        child = state.copy()
        self._apply(child, bi, sidx)
        return child

    def expand(self, state: SearchState, w: int) -> List[SearchState]:
        """Successors of a state: the top-w blocks for the first space that
        admits any; spaces admitting nothing are dropped from the state's
        successors for good."""
        st = state.copy()
        alpha = self.config.alpha
        while len(st.spaces):
            sidx = st.spaces.select()
            sl, sw, sh = st.spaces.dims(sidx)
            top = self.kernel.select(st.live, st.remaining, sl, sw, sh, alpha, w)
            if len(top) == 0:
                st.spaces.remove(sidx)
                continue
            return [self.place(st, int(bi), sidx) for bi in top]
        return []

    def greedy_rollout(self, state: SearchState) -> int:
        """Width-1 completion; updates the incumbent; returns loading volume."""
        st = state.copy()
        alpha = self.config.alpha
        while len(st.spaces):
            sidx = st.spaces.select()
            sl, sw, sh = st.spaces.dims(sidx)
            top = self.kernel.select(st.live, st.remaining, sl, sw, sh, alpha, 1)
            if len(top):
                self._apply(st, int(top[0]), sidx)
            else:
                st.spaces.remove(sidx)
        if incumbent_compare(st.placed_volume, st.total_dose,
                             self.best_volume, self.best_dose):
            self.best_placements = list(st.placements)
            self.best_volume = st.placed_volume
            self.best_dose = st.total_dose
        return st.placed_volume

    def exhausted(self) -> bool:
        return self.meter.work >= self.budget

    def solve(self, progress: Optional[Callable[[dict], None]] = None) -> SearchResult:
        t0 = time.perf_counter()
        root = self.initial_state()
        w = 1.0
        weff = 1
        restarts = 0
        stopped = False
        while not stopped:
            restarts += 1
            weff = effective_width(w)
            beam = [root]
            first_level = True
            restart_evals = 0
            while beam:
                successors = []
                for st in beam:
                    successors.extend(
                        self.expand(st, weff * weff if first_level else weff))
                first_level = False
                if not successors:
                    break
                for s in successors:
                    s.score = self.greedy_rollout(s)
                    self.evaluations += 1
                    restart_evals += 1
                    if self.exhausted():
                        stopped = True
                        break
                if stopped:
                    break
                successors.sort(key=lambda s: -s.score)
                beam = successors[:weff]
            if progress is not None:
                progress({"restart": restarts, "w_eff": weff,
                          "evaluations": self.evaluations,
                          "best_volume": self.best_volume,
                          "best_utilization":
                              self.best_volume / self.instance.pool.volume,
                          "best_dose": self.best_dose,
                          "work_fraction": min(1.0, self.meter.work / self.budget)})
            if restart_evals == 0:
                # nothing can ever be evaluated (no feasible block at the
                # root); wider beams cannot change that
                break
            if self.exhausted():
                break
            w *= SQRT2
        return SearchResult(
            instance=self.instance,
            config=self.config,
            placements=[(self.blocks[bi], x, y, z)
                        for bi, x, y, z in self.best_placements],
            placed_volume=self.best_volume,
            utilization=self.best_volume / self.instance.pool.volume,
            total_dose=self.best_dose,
            restarts=restarts,
            final_width=weff,
            evaluations=self.evaluations,
            work_units=self.meter.work,
            budget_units=self.budget,
            budget_time=min(self.meter.work, self.budget) / self.config.units_per_second,
            wall_time=time.perf_counter() - t0,
        )


def beam_search(instance: Instance, config: SearchConfig,
                block_set: Optional[BlockSet] = None,
                progress: Optional[Callable[[dict], None]] = None) -> SearchResult:
    """Solve one instance; deterministic for fixed instance and config."""
    return Engine(instance, config, block_set).solve(progress)
