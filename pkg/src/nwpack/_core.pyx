# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend (Cython mirror of nwpack._purepy).

Must stay operation-for-operation identical to the pure-Python backend:
same results bit-for-bit, same work-unit accounting, same memo behavior.
Change both together (tests/test_backends.py enforces equivalence).
"""

from libc.stdlib cimport free, malloc, qsort
from libc.string cimport memcpy, memset

import numpy as np

BACKEND_NAME = "compiled"

MEMO_LIMIT = 400_000

W_EVAL = 16
W_HIT = 4
W_ZERO = 1
W_SINGLE = 2
W_MISS = 8

ctypedef long long i64


cdef class WorkMeter:
    """Deterministic operation counter shared by all kernel objects of a solve."""
    cdef public i64 work

    def __cinit__(self):
        self.work = 0

    def add(self, n):
        self.work += <i64> n


# ---------------------------------------------------------------------------
# bounded subset-sum maximization
# ---------------------------------------------------------------------------

cdef i64 _bounded_max_c(i64* vals, i64* cnts, int nv, i64 cap,
                        unsigned char* reach, i64* used) noexcept nogil:
    cdef i64 s, v, c
    cdef int k
    if cap <= 0:
        return 0
    memset(reach, 0, (cap + 1) * sizeof(unsigned char))
    reach[0] = 1
    for k in range(nv):
        v = vals[k]
        c = cnts[k]
        if v > cap or c <= 0:
            continue
        memset(used, 0, (cap + 1) * sizeof(i64))
        for s in range(v, cap + 1):
            if reach[s] == 0 and reach[s - v] != 0 and used[s - v] < c:
                reach[s] = 1
                used[s] = used[s - v] + 1
    s = cap
    while s >= 0:
        if reach[s]:
            return s
        s -= 1
    return 0


def max_combination(values, counts, capacity):
    """Bounded subset-sum maximization over integer lengths."""
    vals_l = [int(v) for v in values]
    cnts_l = [int(c) for c in counts]
    if len(vals_l) != len(cnts_l):
        raise ValueError("values and counts must have equal length")
    if any(v <= 0 for v in vals_l):
        raise ValueError("values must be positive")
    if any(c < 0 for c in cnts_l):
        raise ValueError("counts must be nonnegative")
    cdef i64 cap = int(capacity)
    if cap < 0:
        raise ValueError("capacity must be nonnegative")
    cdef int nv = len(vals_l)
    cdef i64 res
    cdef i64* vals = <i64*> malloc(max(nv, 1) * sizeof(i64))
    cdef i64* cnts = <i64*> malloc(max(nv, 1) * sizeof(i64))
    cdef unsigned char* reach = <unsigned char*> malloc((cap + 2) * sizeof(unsigned char))
    cdef i64* used = <i64*> malloc((cap + 2) * sizeof(i64))
    if vals == NULL or cnts == NULL or reach == NULL or used == NULL:
        free(vals); free(cnts); free(reach); free(used)
        raise MemoryError()
    cdef int k
    for k in range(nv):
        vals[k] = vals_l[k]
        cnts[k] = cnts_l[k]
    res = _bounded_max_c(vals, cnts, nv, cap, reach, used)
    free(vals); free(cnts); free(reach); free(used)
    return int(res)


# ---------------------------------------------------------------------------
# free-space list
# ---------------------------------------------------------------------------

cdef inline int _subtract_into(i64* s, i64* r, i64* out) noexcept nogil:
    """Maximal-slab subtraction; writes up to 6 pieces, returns count.
    Returns -1 when interiors are disjoint (space unchanged)."""
    cdef i64 x = s[0], y = s[1], z = s[2], sl = s[3], sw = s[4], sh = s[5]
    cdef i64 bx = r[0], by = r[1], bz = r[2], bl = r[3], bw = r[4], bh = r[5]
    cdef i64 ix0 = x if x > bx else bx
    cdef i64 iy0 = y if y > by else by
    cdef i64 iz0 = z if z > bz else bz
    cdef i64 ix1 = x + sl if x + sl < bx + bl else bx + bl
    cdef i64 iy1 = y + sw if y + sw < by + bw else by + bw
    cdef i64 iz1 = z + sh if z + sh < bz + bh else bz + bh
    if ix1 <= ix0 or iy1 <= iy0 or iz1 <= iz0:
        return -1
    cdef int n = 0
    if ix0 > x:
        out[n*6] = x; out[n*6+1] = y; out[n*6+2] = z
        out[n*6+3] = ix0 - x; out[n*6+4] = sw; out[n*6+5] = sh; n += 1
    if x + sl > ix1:
        out[n*6] = ix1; out[n*6+1] = y; out[n*6+2] = z
        out[n*6+3] = x + sl - ix1; out[n*6+4] = sw; out[n*6+5] = sh; n += 1
    if iy0 > y:
        out[n*6] = x; out[n*6+1] = y; out[n*6+2] = z
        out[n*6+3] = sl; out[n*6+4] = iy0 - y; out[n*6+5] = sh; n += 1
    if y + sw > iy1:
        out[n*6] = x; out[n*6+1] = iy1; out[n*6+2] = z
        out[n*6+3] = sl; out[n*6+4] = y + sw - iy1; out[n*6+5] = sh; n += 1
    if iz0 > z:
        out[n*6] = x; out[n*6+1] = y; out[n*6+2] = z
        out[n*6+3] = sl; out[n*6+4] = sw; out[n*6+5] = iz0 - z; n += 1
    if z + sh > iz1:
        out[n*6] = x; out[n*6+1] = y; out[n*6+2] = iz1
        out[n*6+3] = sl; out[n*6+4] = sw; out[n*6+5] = z + sh - iz1; n += 1
    return n


cdef inline bint _contains_c(i64* a, i64* b) noexcept nogil:
    return (a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2] and
            a[0] + a[3] >= b[0] + b[3] and
            a[1] + a[4] >= b[1] + b[4] and
            a[2] + a[5] >= b[2] + b[5])


cdef int _update_core(i64* src, int n, int chosen, i64 bl, i64 bw, i64 bh,
                      i64 min_dim, i64* mid, int* n_mid_out) noexcept nogil:
    """Subtract the placed region from every space in src, filter by
    min_dim, prune contained pieces in place inside mid. Returns the number
    of kept pieces (compacted at the front of mid)."""
    cdef i64 region[6]
    region[0] = src[chosen*6]; region[1] = src[chosen*6+1]; region[2] = src[chosen*6+2]
    region[3] = bl; region[4] = bw; region[5] = bh
    cdef int i, j, m = 0, np_
    cdef i64 piece[36]
    for i in range(n):
        np_ = _subtract_into(src + i*6, region, piece)
        if np_ < 0:
            memcpy(mid + m*6, src + i*6, 6 * sizeof(i64))
            m += 1
            continue
        for j in range(np_):
            if (piece[j*6+3] >= min_dim and piece[j*6+4] >= min_dim and
                    piece[j*6+5] >= min_dim):
                memcpy(mid + m*6, piece + j*6, 6 * sizeof(i64))
                m += 1
    n_mid_out[0] = m
    # prune: drop piece i when some j contains it (strictly, or j < i on ties)
    cdef int kept = 0
    cdef bint dominated
    for i in range(m):
        dominated = False
        for j in range(m):
            if j == i:
                continue
            if _contains_c(mid + j*6, mid + i*6) and \
                    (j < i or not _contains_c(mid + i*6, mid + j*6)):
                dominated = True
                break
        if not dominated:
            if kept != i:
                memcpy(mid + kept*6, mid + i*6, 6 * sizeof(i64))
            kept += 1
    return kept


def update_space_list(spaces, chosen, bl, bw, bh, min_dim=0):
    """List-level space update; returns (kept list of 6-tuples, n_mid)."""
    cdef int n = len(spaces)
    cdef int i, k, kept
    cdef int n_mid = 0
    cdef i64* src = <i64*> malloc(max(n, 1) * 6 * sizeof(i64))
    cdef i64* mid = <i64*> malloc(max(n, 1) * 6 * 6 * sizeof(i64))
    if src == NULL or mid == NULL:
        free(src); free(mid)
        raise MemoryError()
    try:
        for i in range(n):
            s = spaces[i]
            for k in range(6):
                src[i*6 + k] = s[k]
        kept = _update_core(src, n, int(chosen), int(bl), int(bw), int(bh),
                            int(min_dim), mid, &n_mid)
        out = []
        for i in range(kept):
            out.append((mid[i*6], mid[i*6+1], mid[i*6+2],
                        mid[i*6+3], mid[i*6+4], mid[i*6+5]))
        return out, n_mid
    finally:
        free(src)
        free(mid)


def select_space_index(spaces):
    """Index of the lowest, leftmost space: min (z, x, y, -volume, position)."""
    cdef int n = len(spaces)
    cdef int i, best = -1
    cdef i64 bz = 0, bx = 0, by = 0, bv = 0
    cdef i64 z, x, y, v
    for i in range(n):
        s = spaces[i]
        x = s[0]; y = s[1]; z = s[2]
        v = (<i64> s[3]) * (<i64> s[4]) * (<i64> s[5])
        if best < 0 or (z < bz or (z == bz and (x < bx or (x == bx and
                (y < by or (y == by and v > bv)))))):
            best = i
            bz = z; bx = x; by = y; bv = v
    return best


cdef class SpaceBuffer:
    """Free-space list owned by one search state."""
    cdef WorkMeter meter
    cdef i64* buf
    cdef int n
    cdef int cap

    def __cinit__(self):
        self.buf = NULL
        self.n = 0
        self.cap = 0

    def __dealloc__(self):
        if self.buf != NULL:
            free(self.buf)

    def __init__(self, WorkMeter meter, spaces):
        self.meter = meter
        cdef int n = len(spaces)
        self._reserve(n + 4)
        cdef int i, k
        for i in range(n):
            s = spaces[i]
            for k in range(6):
                self.buf[i*6 + k] = s[k]
        self.n = n

    cdef _reserve(self, int want):
        cdef i64* nb
        if want <= self.cap:
            return
        want = max(want, self.cap * 2, 8)
        nb = <i64*> malloc(want * 6 * sizeof(i64))
        if nb == NULL:
            raise MemoryError()
        if self.buf != NULL:
            memcpy(nb, self.buf, self.n * 6 * sizeof(i64))
            free(self.buf)
        self.buf = nb
        self.cap = want

    def __len__(self):
        return self.n

    def copy(self):
        cdef SpaceBuffer dup = SpaceBuffer.__new__(SpaceBuffer)
        dup.meter = self.meter
        dup._reserve(self.n + 4)
        memcpy(dup.buf, self.buf, self.n * 6 * sizeof(i64))
        dup.n = self.n
        return dup

    def get(self, int i):
        cdef i64* s = self.buf + i*6
        return (s[0], s[1], s[2], s[3], s[4], s[5])

    def dims(self, int i):
        cdef i64* s = self.buf + i*6
        return (s[3], s[4], s[5])

    def anchor(self, int i):
        cdef i64* s = self.buf + i*6
        return (s[0], s[1], s[2])

    def select(self):
        self.meter.work += self.n
        cdef int i, best = -1
        cdef i64 bz = 0, bx = 0, by = 0, bv = 0
        cdef i64 z, x, y, v
        cdef i64* s
        for i in range(self.n):
            s = self.buf + i*6
            x = s[0]; y = s[1]; z = s[2]
            v = s[3] * s[4] * s[5]
            if best < 0 or (z < bz or (z == bz and (x < bx or (x == bx and
                    (y < by or (y == by and v > bv)))))):
                best = i
                bz = z; bx = x; by = y; bv = v
        return best

    def remove(self, int i):
        if i < self.n - 1:
            memcpy(self.buf + i*6, self.buf + (i+1)*6,
                   (self.n - 1 - i) * 6 * sizeof(i64))
        self.n -= 1

    def update(self, int chosen, bl, bw, bh, min_dim=0):
        cdef int n_before = self.n
        cdef i64* mid = <i64*> malloc(max(self.n, 1) * 36 * sizeof(i64))
        if mid == NULL:
            raise MemoryError()
        cdef int n_mid = 0
        cdef int kept
        try:
            kept = _update_core(self.buf, self.n, chosen,
                                int(bl), int(bw), int(bh), int(min_dim),
                                mid, &n_mid)
            self._reserve(kept)
            memcpy(self.buf, mid, kept * 6 * sizeof(i64))
            self.n = kept
        finally:
            free(mid)
        self.meter.work += n_before + n_mid + ((<i64> n_mid * n_mid) >> 4)

    def to_list(self):
        cdef int i
        out = []
        for i in range(self.n):
            out.append(self.get(i))
        return out


# ---------------------------------------------------------------------------
# block kernel
# ---------------------------------------------------------------------------

cdef struct UBEntry:
    double ub
    i64 idx        # block index

cdef int _cmp_ub(const void* pa, const void* pb) noexcept nogil:
    cdef const UBEntry* a = <const UBEntry*> pa
    cdef const UBEntry* b = <const UBEntry*> pb
    if a.ub > b.ub:
        return -1
    if a.ub < b.ub:
        return 1
    if a.idx < b.idx:
        return -1
    if a.idx > b.idx:
        return 1
    return 0

cdef struct EvalEntry:
    double score
    i64 net
    double dose
    i64 idx

cdef int _cmp_eval(const void* pa, const void* pb) noexcept nogil:
    cdef const EvalEntry* a = <const EvalEntry*> pa
    cdef const EvalEntry* b = <const EvalEntry*> pb
    if a.score > b.score:
        return -1
    if a.score < b.score:
        return 1
    if a.net > b.net:
        return -1
    if a.net < b.net:
        return 1
    if a.dose > b.dose:
        return -1
    if a.dose < b.dose:
        return 1
    if a.idx < b.idx:
        return -1
    if a.idx > b.idx:
        return 1
    return 0


cdef class BlockKernel:
    """Score/select kernels over the generated block table (see _purepy)."""
    cdef WorkMeter meter
    cdef i64[:, ::1] dims
    cdef i64[::1] net
    cdef i64[::1] bound
    cdef i64[::1] waste
    cdef double[::1] dose
    cdef double[::1] anor
    cdef i64[::1] req_indptr
    cdef i64[::1] req_type
    cdef i64[::1] req_cnt
    cdef i64[::1] box_indptr
    cdef double[::1] box_ga
    cdef double[::1] box_zc
    cdef i64[:, ::1] type_dims
    cdef double pool_height
    cdef double unit_scale
    cdef public dict memo
    cdef int n_blocks
    cdef int n_types
    cdef i64[:, ::1] axis_order
    # scratch
    cdef i64[:, ::1] gvals
    cdef i64[:, ::1] gcnts
    cdef i64[:, ::1] tg
    cdef int[::1] ngroups
    cdef i64[::1] red
    cdef i64[::1] fv
    cdef i64[::1] fc
    cdef i64[::1] keybuf
    cdef unsigned char* dp_reach
    cdef i64* dp_used
    cdef int dp_cap

    def __cinit__(self):
        self.dp_reach = NULL
        self.dp_used = NULL
        self.dp_cap = 0

    def __dealloc__(self):
        if self.dp_reach != NULL:
            free(self.dp_reach)
        if self.dp_used != NULL:
            free(self.dp_used)

    def __init__(self, WorkMeter meter, dims, net_vol, bound_vol, dose, anor,
                 req_indptr, req_type, req_cnt,
                 box_indptr, box_ga, box_zc,
                 type_dims, pool_height, unit_scale):
        self.meter = meter
        self.dims = np.ascontiguousarray(dims, dtype=np.int64)
        self.net = np.ascontiguousarray(net_vol, dtype=np.int64)
        self.bound = np.ascontiguousarray(bound_vol, dtype=np.int64)
        self.waste = np.ascontiguousarray(
            np.asarray(bound_vol, dtype=np.int64) - np.asarray(net_vol, dtype=np.int64))
        self.dose = np.ascontiguousarray(dose, dtype=np.float64)
        self.anor = np.ascontiguousarray(anor, dtype=np.float64)
        self.req_indptr = np.ascontiguousarray(req_indptr, dtype=np.int64)
        self.req_type = np.ascontiguousarray(req_type, dtype=np.int64)
        self.req_cnt = np.ascontiguousarray(req_cnt, dtype=np.int64)
        self.box_indptr = np.ascontiguousarray(box_indptr, dtype=np.int64)
        self.box_ga = np.ascontiguousarray(box_ga, dtype=np.float64)
        self.box_zc = np.ascontiguousarray(box_zc, dtype=np.float64)
        self.type_dims = np.ascontiguousarray(type_dims, dtype=np.int64)
        self.pool_height = float(pool_height)
        self.unit_scale = float(unit_scale)
        self.memo = {}
        self.n_blocks = self.dims.shape[0]
        self.n_types = self.type_dims.shape[0]
        cdef int t = self.n_types
        td = np.asarray(self.type_dims)
        order = np.zeros((3, max(t, 1)), dtype=np.int64)
        for a in range(3):
            if t:
                order[a, :t] = np.lexsort((np.arange(t), td[:, a]))
        self.axis_order = np.ascontiguousarray(order)
        self.gvals = np.zeros((3, max(t, 1)), dtype=np.int64)
        self.gcnts = np.zeros((3, max(t, 1)), dtype=np.int64)
        self.tg = np.zeros((3, max(t, 1)), dtype=np.int64)
        self.ngroups = np.zeros(3, dtype=np.int32)
        self.red = np.zeros(max(t, 1), dtype=np.int64)
        self.fv = np.zeros(max(t, 1), dtype=np.int64)
        self.fc = np.zeros(max(t, 1), dtype=np.int64)
        self.keybuf = np.zeros(2 * max(t, 1) + 2, dtype=np.int64)

    cdef _grow_dp(self, i64 cap):
        if cap + 1 <= self.dp_cap:
            return
        cdef int want = max(<int> cap + 2, self.dp_cap * 2, 1024)
        if self.dp_reach != NULL:
            free(self.dp_reach)
        if self.dp_used != NULL:
            free(self.dp_used)
        self.dp_reach = <unsigned char*> malloc(want * sizeof(unsigned char))
        self.dp_used = <i64*> malloc(want * sizeof(i64))
        if self.dp_reach == NULL or self.dp_used == NULL:
            raise MemoryError()
        self.dp_cap = want

    def block_req(self, i):
        cdef int bi = int(i)
        cdef i64 lo = self.req_indptr[bi]
        cdef i64 hi = self.req_indptr[bi + 1]
        out = []
        cdef i64 k
        for k in range(lo, hi):
            out.append((int(self.req_type[k]), int(self.req_cnt[k])))
        return out

    def refilter(self, live, remaining):
        cdef i64[::1] lv = np.ascontiguousarray(live, dtype=np.int64)
        cdef i64[::1] rem = np.ascontiguousarray(remaining, dtype=np.int64)
        self.meter.work += lv.shape[0]
        out = np.empty(lv.shape[0], dtype=np.int64)
        cdef i64[::1] ov = out
        cdef int n = 0
        cdef int j
        cdef i64 i, k
        cdef bint ok
        for j in range(lv.shape[0]):
            i = lv[j]
            ok = True
            for k in range(self.req_indptr[i], self.req_indptr[i + 1]):
                if self.req_cnt[k] > rem[self.req_type[k]]:
                    ok = False
                    break
            if ok:
                ov[n] = i
                n += 1
        return out[:n]

    def dose_at(self, i, z_anchor):
        cdef int bi = int(i)
        cdef double total = 0.0
        cdef double h = self.pool_height
        cdef double scale = self.unit_scale
        cdef double z = float(z_anchor)
        cdef double r
        cdef i64 k
        for k in range(self.box_indptr[bi], self.box_indptr[bi + 1]):
            r = (h - (z + self.box_zc[k])) * scale
            total += self.box_ga[k] / (r * r)
        return total

    cdef _group_axis(self, int axis, i64[::1] remaining):
        cdef int g = -1
        cdef i64 last_v = -1
        cdef int k
        cdef i64 t, v, c
        for k in range(self.n_types):
            t = self.axis_order[axis, k]
            v = self.type_dims[t, axis]
            c = remaining[t]
            if g >= 0 and last_v == v:
                self.gcnts[axis, g] += c
            else:
                g += 1
                self.gvals[axis, g] = v
                self.gcnts[axis, g] = c
                last_v = v
            self.tg[axis, t] = g
        self.ngroups[axis] = g + 1

    cdef i64 _axis_max(self, int block, int axis, i64 cap):
        cdef WorkMeter meter = self.meter
        if cap <= 0:
            meter.work += W_ZERO
            return 0
        cdef int ng = self.ngroups[axis]
        cdef int k
        cdef i64 kk
        for k in range(ng):
            self.red[k] = self.gcnts[axis, k]
        cdef i64 lo = self.req_indptr[block]
        cdef i64 hi = self.req_indptr[block + 1]
        for kk in range(lo, hi):
            self.red[self.tg[axis, self.req_type[kk]]] -= self.req_cnt[kk]
        cdef int nf = 0
        cdef i64 v, c
        for k in range(ng):
            v = self.gvals[axis, k]
            c = self.red[k]
            if c > 0 and v <= cap:
                self.fv[nf] = v
                self.fc[nf] = c
                nf += 1
        if nf == 0:
            meter.work += W_ZERO
            return 0
        cdef i64 m
        if nf == 1:
            meter.work += W_SINGLE
            v = self.fv[0]
            c = self.fc[0]
            m = cap // v
            if c < m:
                m = c
            return v * m
        # memo key: cap, filtered values, filtered counts
        self.keybuf[0] = cap
        self.keybuf[1] = nf
        for k in range(nf):
            self.keybuf[2 + k] = self.fv[k]
            self.keybuf[2 + nf + k] = self.fc[k]
        kb = np.asarray(self.keybuf[:2 + 2 * nf]).tobytes()
        hit = self.memo.get(kb)
        if hit is not None:
            meter.work += W_HIT
            return <i64> hit
        meter.work += W_MISS + ((<i64> nf * (cap + 1)) >> 4)
        self._grow_dp(cap)
        cdef i64 res = _bounded_max_c(&self.fv[0], &self.fc[0], nf, cap,
                                      self.dp_reach, self.dp_used)
        if len(self.memo) >= MEMO_LIMIT:
            self.memo.clear()
        self.memo[kb] = int(res)
        return res

    def select(self, live, remaining, sl, sw, sh, alpha, w):
        """Top-w feasible blocks for a space, in final score order."""
        cdef i64[::1] lv = np.ascontiguousarray(live, dtype=np.int64)
        cdef i64[::1] rem = np.ascontiguousarray(remaining, dtype=np.int64)
        cdef i64 csl = int(sl), csw = int(sw), csh = int(sh)
        cdef double calpha = float(alpha)
        cdef int cw = int(w)
        cdef WorkMeter meter = self.meter
        meter.work += lv.shape[0]
        cdef i64 vs = csl * csw * csh
        cdef double fvs = <double> vs
        cdef UBEntry* ub = <UBEntry*> malloc(max(<int> lv.shape[0], 1) * sizeof(UBEntry))
        if ub == NULL:
            raise MemoryError()
        cdef int ncand = 0
        cdef int j
        cdef i64 i
        try:
            for j in range(lv.shape[0]):
                i = lv[j]
                if (self.dims[i, 0] <= csl and self.dims[i, 1] <= csw and
                        self.dims[i, 2] <= csh):
                    ub[ncand].ub = ((self.net[i] - self.waste[i]) / fvs
                                    + calpha * self.anor[i])
                    ub[ncand].idx = i
                    ncand += 1
            if ncand == 0:
                return np.empty(0, dtype=np.int64)
            meter.work += ncand
            qsort(ub, ncand, sizeof(UBEntry), _cmp_ub)
            self._group_axis(0, rem)
            self._group_axis(1, rem)
            self._group_axis(2, rem)
            return self._scan(ub, ncand, csl, csw, csh, vs, fvs, calpha, cw)
        finally:
            free(ub)

    cdef _scan(self, UBEntry* ub, int ncand, i64 csl, i64 csw, i64 csh,
               i64 vs, double fvs, double calpha, int cw):
        cdef WorkMeter meter = self.meter
        cdef EvalEntry* ev = <EvalEntry*> malloc(ncand * sizeof(EvalEntry))
        cdef double* topw = <double*> malloc(max(cw, 1) * sizeof(double))
        if ev == NULL or topw == NULL:
            free(ev); free(topw)
            raise MemoryError()
        cdef int nev = 0, ntop = 0
        cdef double kth = 0.0, score
        cdef int k, m, nsel
        cdef i64 i, f0, f1, f2, vloss
        cdef i64[::1] ov
        try:
            for k in range(ncand):
                if ntop == cw and ub[k].ub < kth:
                    break
                i = ub[k].idx
                meter.work += W_EVAL
                f0 = self.dims[i, 0] + self._axis_max(<int> i, 0, csl - self.dims[i, 0])
                f1 = self.dims[i, 1] + self._axis_max(<int> i, 1, csw - self.dims[i, 1])
                f2 = self.dims[i, 2] + self._axis_max(<int> i, 2, csh - self.dims[i, 2])
                vloss = vs - f0 * f1 * f2
                score = ((self.net[i] - vloss - self.waste[i]) / fvs
                         + calpha * self.anor[i])
                ev[nev].score = score
                ev[nev].net = self.net[i]
                ev[nev].dose = self.dose[i]
                ev[nev].idx = i
                nev += 1
                if ntop < cw:
                    topw[ntop] = score
                    ntop += 1
                    if ntop == cw:
                        kth = topw[0]
                        for m in range(1, ntop):
                            if topw[m] < kth:
                                kth = topw[m]
                elif score > kth:
                    for m in range(ntop):
                        if topw[m] == kth:
                            topw[m] = score
                            break
                    kth = topw[0]
                    for m in range(1, ntop):
                        if topw[m] < kth:
                            kth = topw[m]
            qsort(ev, nev, sizeof(EvalEntry), _cmp_eval)
            nsel = nev if nev < cw else cw
            out = np.empty(nsel, dtype=np.int64)
            ov = out
            for k in range(nsel):
                ov[k] = ev[k].idx
            return out
        finally:
            free(ev)
            free(topw)

    def score_one(self, i, remaining, sl, sw, sh, alpha):
        """Exact score of one block in one space (diagnostic / test hook)."""
        cdef i64[::1] rem = np.ascontiguousarray(remaining, dtype=np.int64)
        cdef int bi = int(i)
        cdef i64 csl = int(sl), csw = int(sw), csh = int(sh)
        self._group_axis(0, rem)
        self._group_axis(1, rem)
        self._group_axis(2, rem)
        cdef i64 vs = csl * csw * csh
        cdef i64 f0 = self.dims[bi, 0] + self._axis_max(bi, 0, csl - self.dims[bi, 0])
        cdef i64 f1 = self.dims[bi, 1] + self._axis_max(bi, 1, csw - self.dims[bi, 1])
        cdef i64 f2 = self.dims[bi, 2] + self._axis_max(bi, 2, csh - self.dims[bi, 2])
        cdef i64 vloss = vs - f0 * f1 * f2
        return ((self.net[bi] - vloss - self.waste[bi]) / (<double> vs)
                + float(alpha) * self.anor[bi])

    def clear_memo(self):
        self.memo.clear()
