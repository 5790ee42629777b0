"""Pure-Python kernel backend.

Reference implementation of the hot solver kernels; `nwpack._core` is the
compiled mirror. Both backends must produce bit-identical results and
identical work-unit counts, so any change here has to be applied to
`_core.pyx` as well (tests/test_backends.py checks equivalence).

Work units are the solver's deterministic clock: every kernel operation
charges a fixed integer cost to a shared WorkMeter, and the search stops
when the budget derived from the time limit is consumed. This is what
makes solves byte-reproducible regardless of machine load or backend.
"""

from __future__ import annotations

import heapq

import numpy as np

BACKEND_NAME = "python"

MEMO_LIMIT = 400_000

# work-unit costs (mirrored in _core.pyx)
W_EVAL = 16
W_HIT = 4
W_ZERO = 1
W_SINGLE = 2
W_MISS = 8


class WorkMeter:
    """Deterministic operation counter shared by all kernel objects of a solve."""

    __slots__ = ("work",)

    def __init__(self):
        self.work = 0

    def add(self, n):
        self.work += n


def _bounded_reach(values, counts, capacity):
    """Reachability table of bounded sums up to capacity."""
    reach = bytearray(capacity + 1)
    reach[0] = 1
    for v, c in zip(values, counts):
        if v > capacity or c <= 0:
            continue
        used = [0] * (capacity + 1)
        for s in range(v, capacity + 1):
            if not reach[s] and reach[s - v] and used[s - v] < c:
                reach[s] = 1
                used[s] = used[s - v] + 1
    return reach


def _bounded_max(values, counts, capacity):
    """Max sum of values (each usable up to its count) not exceeding capacity."""
    if capacity <= 0:
        return 0
    reach = _bounded_reach(values, counts, capacity)
    for s in range(capacity, -1, -1):
        if reach[s]:
            return s
    return 0


def _best_le_table(values, counts, capacity):
    """best_le[c] = max bounded sum <= c, for every c in 0..capacity."""
    reach = _bounded_reach(values, counts, capacity)
    table = [0] * (capacity + 1)
    best = 0
    for s in range(capacity + 1):
        if reach[s]:
            best = s
        table[s] = best
    return table


def max_combination(values, counts, capacity):
    """Bounded subset-sum maximization over integer lengths."""
    vals = [int(v) for v in values]
    cnts = [int(c) for c in counts]
    if len(vals) != len(cnts):
        raise ValueError("values and counts must have equal length")
    if any(v <= 0 for v in vals):
        raise ValueError("values must be positive")
    if any(c < 0 for c in cnts):
        raise ValueError("counts must be nonnegative")
    if capacity < 0:
        raise ValueError("capacity must be nonnegative")
    return _bounded_max(vals, cnts, int(capacity))


def _subtract(space, region):
    """Maximal-slab subtraction of an intersecting region from a free space.

    Returns the (up to six) full-extent residual cuboids; returns [space]
    unchanged when the interiors are disjoint.
    """
    x, y, z, sl, sw, sh = space
    bx, by, bz, bl, bw, bh = region
    ix0 = x if x > bx else bx
    iy0 = y if y > by else by
    iz0 = z if z > bz else bz
    ix1 = min(x + sl, bx + bl)
    iy1 = min(y + sw, by + bw)
    iz1 = min(z + sh, bz + bh)
    if ix1 <= ix0 or iy1 <= iy0 or iz1 <= iz0:
        return [space]
    out = []
    if ix0 > x:
        out.append((x, y, z, ix0 - x, sw, sh))
    if x + sl > ix1:
        out.append((ix1, y, z, x + sl - ix1, sw, sh))
    if iy0 > y:
        out.append((x, y, z, sl, iy0 - y, sh))
    if y + sw > iy1:
        out.append((x, iy1, z, sl, y + sw - iy1, sh))
    if iz0 > z:
        out.append((x, y, z, sl, sw, iz0 - z))
    if z + sh > iz1:
        out.append((x, y, iz1, sl, sw, z + sh - iz1))
    return out


def _contains(a, b):
    return (a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2] and
            a[0] + a[3] >= b[0] + b[3] and
            a[1] + a[4] >= b[1] + b[4] and
            a[2] + a[5] >= b[2] + b[5])


def update_space_list(spaces, chosen, bl, bw, bh, min_dim=0):
    """Space-list update after placing a bl x bw x bh block at spaces[chosen]'s anchor.

    Subtracts the placed region from every intersecting space (the chosen
    space's subtraction is exactly its three overlapping residuals), drops
    slabs with any dimension below min_dim, and prunes contained spaces.
    """
    x, y, z = spaces[chosen][0], spaces[chosen][1], spaces[chosen][2]
    region = (x, y, z, bl, bw, bh)
    mid = []
    for s in spaces:
        for piece in _subtract(s, region):
            if piece[3] >= min_dim and piece[4] >= min_dim and piece[5] >= min_dim:
                mid.append(piece)
    kept = []
    n = len(mid)
    for i in range(n):
        a = mid[i]
        dominated = False
        for j in range(n):
            if j == i:
                continue
            b = mid[j]
            if _contains(b, a) and (j < i or not _contains(a, b)):
                dominated = True
                break
        if not dominated:
            kept.append(a)
    return kept, n


def select_space_index(spaces):
    """Index of the lowest, leftmost space: min (z, x, y, -volume, position)."""
    best = -1
    best_key = None
    for i, s in enumerate(spaces):
        key = (s[2], s[0], s[1], -(s[3] * s[4] * s[5]))
        if best < 0 or key < best_key:
            best = i
            best_key = key
    return best


class SpaceBuffer:
    """Free-space list owned by one search state."""

    __slots__ = ("meter", "spaces")

    def __init__(self, meter, spaces):
        self.meter = meter
        self.spaces = [tuple(int(v) for v in s) for s in spaces]

    def __len__(self):
        return len(self.spaces)

    def copy(self):
        dup = SpaceBuffer.__new__(SpaceBuffer)
        dup.meter = self.meter
        dup.spaces = list(self.spaces)
        return dup

    def get(self, i):
        return self.spaces[i]

    def dims(self, i):
        s = self.spaces[i]
        return s[3], s[4], s[5]

    def anchor(self, i):
        s = self.spaces[i]
        return s[0], s[1], s[2]

    def select(self):
        self.meter.work += len(self.spaces)
        return select_space_index(self.spaces)

    def remove(self, i):
        del self.spaces[i]

    def update(self, chosen, bl, bw, bh, min_dim=0):
        kept, n_mid = update_space_list(self.spaces, chosen, bl, bw, bh, min_dim)
        self.meter.work += len(self.spaces) + n_mid + ((n_mid * n_mid) >> 4)
        self.spaces = kept

    def to_list(self):
        return list(self.spaces)


class BlockKernel:
    """Score/select kernels over the generated block table.

    Holds flat per-block arrays (dims, volumes, dose, normalized dose, the
    per-type requirement in CSR form, and per-box dose terms) plus per-type
    axis dimensions, and evaluates the block score

        (V(b) - V_loss(b, s) - V_waste(b)) / V(s) + alpha * A_nor(b)

    with V_loss from the per-axis bounded subset-sum extensions.
    """

    def __init__(self, meter, dims, net_vol, bound_vol, dose, anor,
                 req_indptr, req_type, req_cnt,
                 box_indptr, box_ga, box_zc,
                 type_dims, pool_dims, unit_scale):
        self.meter = meter
        self.dims = [tuple(int(v) for v in row) for row in dims]
        self.net = [int(v) for v in net_vol]
        self.bound = [int(v) for v in bound_vol]
        self.waste = [b - n for b, n in zip(self.bound, self.net)]
        self.dose = [float(v) for v in dose]
        self.anor = [float(v) for v in anor]
        self.req_indptr = [int(v) for v in req_indptr]
        self.req_type = [int(v) for v in req_type]
        self.req_cnt = [int(v) for v in req_cnt]
        self.box_indptr = [int(v) for v in box_indptr]
        self.box_ga = [float(v) for v in box_ga]
        self.box_zc = [float(v) for v in box_zc]
        self.type_dims = [tuple(int(v) for v in row) for row in type_dims]
        self.pool_dims = tuple(int(v) for v in pool_dims)
        self.pool_height = float(self.pool_dims[2])
        self.cap_max = max(self.pool_dims)  # DP tables answer any space dim
        self.unit_scale = float(unit_scale)
        self.memo = {}
        # per-axis type order sorted by dimension value (then id), for
        # canonical grouping of the remaining-dimension multiset
        t = len(self.type_dims)
        self.axis_order = [sorted(range(t), key=lambda k, a=a: (self.type_dims[k][a], k))
                           for a in range(3)]

    def block_req(self, i):
        lo, hi = self.req_indptr[i], self.req_indptr[i + 1]
        return list(zip(self.req_type[lo:hi], self.req_cnt[lo:hi]))

    def refilter(self, live, remaining):
        """Indices in live whose requirement still fits the remaining inventory."""
        self.meter.work += len(live)
        rt, rc, ip = self.req_type, self.req_cnt, self.req_indptr
        out = []
        for i in live:
            i = int(i)
            ok = True
            for k in range(ip[i], ip[i + 1]):
                if rc[k] > remaining[rt[k]]:
                    ok = False
                    break
            if ok:
                out.append(i)
        return np.array(out, dtype=np.int64)

    def dose_at(self, i, z_anchor):
        """Total pool-top dose of block i anchored at height z_anchor."""
        i = int(i)
        total = 0.0
        h = self.pool_height
        scale = self.unit_scale
        z = float(z_anchor)
        for k in range(self.box_indptr[i], self.box_indptr[i + 1]):
            r = (h - (z + self.box_zc[k])) * scale
            total += self.box_ga[k] / (r * r)
        return total

    def _group_axis(self, axis, remaining):
        vals = []
        cnts = []
        tg = [0] * len(self.type_dims)
        for t in self.axis_order[axis]:
            v = self.type_dims[t][axis]
            c = int(remaining[t])
            if vals and vals[-1] == v:
                cnts[-1] += c
            else:
                vals.append(v)
                cnts.append(c)
            tg[t] = len(vals) - 1
        return vals, cnts, tg

    def _axis_max(self, block, axis, cap, groups):
        """l_max for one axis: bounded max-combination of remaining dims <= cap.

        Memoized per reduced dimension multiset: one DP run to the pool's
        max dimension yields a prefix table answering every capacity.
        """
        meter = self.meter
        if cap <= 0:
            meter.work += W_ZERO
            return 0
        vals, full, tg = groups
        cnts = list(full)
        lo, hi = self.req_indptr[block], self.req_indptr[block + 1]
        for k in range(lo, hi):
            cnts[tg[self.req_type[k]]] -= self.req_cnt[k]
        fv = []
        fc = []
        for v, c in zip(vals, cnts):
            if c > 0 and v <= cap:
                fv.append(v)
                fc.append(c)
        if not fv:
            meter.work += W_ZERO
            return 0
        if len(fv) == 1:
            meter.work += W_SINGLE
            v, c = fv[0], fc[0]
            m = cap // v
            if c < m:
                m = c
            return v * m
        key = (tuple(fv), tuple(fc))
        table = self.memo.get(key)
        if table is not None:
            meter.work += W_HIT
            return table[cap]
        meter.work += W_MISS + ((len(fv) * (self.cap_max + 1)) >> 4)
        table = _best_le_table(fv, fc, self.cap_max)
        if len(self.memo) >= MEMO_LIMIT:
            self.memo.clear()
        self.memo[key] = table
        return table[cap]

    def select(self, live, remaining, sl, sw, sh, alpha, w):
        """Top-w feasible blocks for a space, in final score order.

        Candidates are scanned in descending order of the V_loss-free score
        bound; scanning stops once the bound falls strictly below the w-th
        best exact score, which cannot change the exact top-w result.
        """
        meter = self.meter
        meter.work += len(live)
        vs = sl * sw * sh
        fvs = float(vs)
        cands = []
        for i in live:
            i = int(i)
            d = self.dims[i]
            if d[0] <= sl and d[1] <= sw and d[2] <= sh:
                cands.append(i)
        if not cands:
            return np.empty(0, dtype=np.int64)
        meter.work += len(cands)
        ubs = [(self.net[i] - self.waste[i]) / fvs + alpha * self.anor[i]
               for i in cands]
        order = sorted(range(len(cands)), key=lambda k: (-ubs[k], cands[k]))
        groups = [self._group_axis(a, remaining) for a in range(3)]
        evaluated = []
        heap = []  # w smallest of the current best exact scores
        for k in order:
            if len(heap) == w and ubs[k] < heap[0]:
                break
            i = cands[k]
            meter.work += W_EVAL
            d = self.dims[i]
            f0 = d[0] + self._axis_max(i, 0, sl - d[0], groups[0])
            f1 = d[1] + self._axis_max(i, 1, sw - d[1], groups[1])
            f2 = d[2] + self._axis_max(i, 2, sh - d[2], groups[2])
            vloss = vs - f0 * f1 * f2
            score = (self.net[i] - vloss - self.waste[i]) / fvs + alpha * self.anor[i]
            evaluated.append((score, i))
            if len(heap) < w:
                heapq.heappush(heap, score)
            elif score > heap[0]:
                heapq.heapreplace(heap, score)
        evaluated.sort(key=lambda e: (-e[0], -self.net[e[1]], -self.dose[e[1]], e[1]))
        return np.array([i for _, i in evaluated[:w]], dtype=np.int64)

    def score_one(self, i, remaining, sl, sw, sh, alpha):
        """Exact score of one block in one space (diagnostic / test hook)."""
        i = int(i)
        groups = [self._group_axis(a, remaining) for a in range(3)]
        vs = sl * sw * sh
        d = self.dims[i]
        f0 = d[0] + self._axis_max(i, 0, sl - d[0], groups[0])
        f1 = d[1] + self._axis_max(i, 1, sw - d[1], groups[1])
        f2 = d[2] + self._axis_max(i, 2, sh - d[2], groups[2])
        vloss = vs - f0 * f1 * f2
        return (self.net[i] - vloss - self.waste[i]) / float(vs) + alpha * self.anor[i]

    def clear_memo(self):
        self.memo.clear()
