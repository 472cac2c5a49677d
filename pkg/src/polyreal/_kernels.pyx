# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel.

Same algorithm and operation order as ``_pykernels.py``. Orientation
determinants and the rational chord endpoints are held in signed 128-bit
integers; with ``|coord| <= 2**16`` the largest intermediate (an endpoint
numerator times a denominator, compared crosswise) stays below ``2**126``.
"""

import itertools

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdint cimport int32_t, int64_t, uint64_t
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"

BACKEND = "cython"

KERNEL_COORD_LIMIT = 2**16
DEF C_INIT_ATTEMPTS = 10000
INIT_ATTEMPTS = C_INIT_ATTEMPTS
DEF DECREASE_TOL = 1e-9
DEF DBL_MIN_ = 2.2250738585072014e-308

DESCENT, PLATEAU, RESTART, DEADEND = 0, 1, 2, 3
REALIZED, EXHAUSTED, INIT_FAILED = 0, 1, 2

cdef int C_DESCENT = 0, C_PLATEAU = 1, C_RESTART = 2, C_DEADEND = 3

ctypedef struct Rat:
    i128 c[3]
    i128 d


cdef inline i128 orient(const int64_t* a, const int64_t* b, const int64_t* c,
                        const int64_t* d) noexcept nogil:
    cdef i128 bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2]
    cdef i128 cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2]
    cdef i128 dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


cdef inline bint same(const int64_t* p, const int64_t* q) noexcept nogil:
    return p[0] == q[0] and p[1] == q[1] and p[2] == q[2]


cdef inline bint on_segment(const int64_t* p, const int64_t* a, const int64_t* b) noexcept nogil:
    cdef int64_t abx = b[0] - a[0], aby = b[1] - a[1], abz = b[2] - a[2]
    cdef int64_t apx = p[0] - a[0], apy = p[1] - a[1], apz = p[2] - a[2]
    if abx == 0 and aby == 0 and abz == 0:
        return apx == 0 and apy == 0 and apz == 0
    if aby * apz - abz * apy != 0 or abz * apx - abx * apz != 0 or abx * apy - aby * apx != 0:
        return False
    cdef int64_t t = apx * abx + apy * aby + apz * abz
    return 0 <= t <= abx * abx + aby * aby + abz * abz


cdef inline void cross(const int64_t* u, const int64_t* v, int64_t* out) noexcept nogil:
    out[0] = u[1] * v[2] - u[2] * v[1]
    out[1] = u[2] * v[0] - u[0] * v[2]
    out[2] = u[0] * v[1] - u[1] * v[0]


cdef inline void drop(const int64_t* n, int* i, int* j) noexcept nogil:
    cdef int64_t ax = n[0] if n[0] >= 0 else -n[0]
    cdef int64_t ay = n[1] if n[1] >= 0 else -n[1]
    cdef int64_t az = n[2] if n[2] >= 0 else -n[2]
    if ax >= ay and ax >= az:
        i[0] = 1; j[0] = 2
    elif ay >= az:
        i[0] = 0; j[0] = 2
    else:
        i[0] = 0; j[0] = 1


cdef inline int o2(const int64_t* p, const int64_t* q, const int64_t* r, int i, int j) noexcept nogil:
    cdef int64_t v = (q[i] - p[i]) * (r[j] - p[j]) - (q[j] - p[j]) * (r[i] - p[i])
    return (v > 0) - (v < 0)


cdef bint c_point_in_triangle(const int64_t* p, const int64_t* a, const int64_t* b,
                              const int64_t* c) noexcept nogil:
    if orient(a, b, c, p) != 0:
        return False
    cdef int64_t u[3]
    cdef int64_t w[3]
    cdef int64_t n[3]
    cdef int i, j, s1, s2, s3
    u[0] = b[0] - a[0]; u[1] = b[1] - a[1]; u[2] = b[2] - a[2]
    w[0] = c[0] - a[0]; w[1] = c[1] - a[1]; w[2] = c[2] - a[2]
    cross(u, w, n)
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        return on_segment(p, a, b) or on_segment(p, b, c) or on_segment(p, a, c)
    drop(n, &i, &j)
    s1 = o2(a, b, p, i, j)
    s2 = o2(b, c, p, i, j)
    s3 = o2(c, a, p, i, j)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


cdef bint c_segments_intersect(const int64_t* p, const int64_t* q, const int64_t* r,
                               const int64_t* s) noexcept nogil:
    if same(p, q):
        return on_segment(p, r, s)
    if same(r, s):
        return on_segment(r, p, q)
    if orient(p, q, r, s) != 0:
        return False
    cdef int64_t u[3]
    cdef int64_t w[3]
    cdef int64_t n[3]
    cdef int i, j, d1, d2, d3, d4
    u[0] = q[0] - p[0]; u[1] = q[1] - p[1]; u[2] = q[2] - p[2]
    w[0] = r[0] - p[0]; w[1] = r[1] - p[1]; w[2] = r[2] - p[2]
    cross(u, w, n)
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        w[0] = s[0] - p[0]; w[1] = s[1] - p[1]; w[2] = s[2] - p[2]
        cross(u, w, n)
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        return (on_segment(p, r, s) or on_segment(q, r, s)
                or on_segment(r, p, q) or on_segment(s, p, q))
    drop(n, &i, &j)
    d1 = o2(r, s, p, i, j)
    d2 = o2(r, s, q, i, j)
    d3 = o2(p, q, r, i, j)
    d4 = o2(p, q, s, i, j)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return ((d1 == 0 and on_segment(p, r, s)) or (d2 == 0 and on_segment(q, r, s))
            or (d3 == 0 and on_segment(r, p, q)) or (d4 == 0 and on_segment(s, p, q)))


cdef inline int chord(const int64_t** T, const i128* d, Rat* out) noexcept nogil:
    cdef int cnt = 0, i, j, k, e
    cdef i128 di, dj, den
    for i in range(3):
        if d[i] == 0:
            for k in range(3):
                out[cnt].c[k] = T[i][k]
            out[cnt].d = 1
            cnt += 1
    for e in range(3):
        if e == 0:
            i = 0; j = 1
        elif e == 1:
            i = 1; j = 2
        else:
            i = 0; j = 2
        di = d[i]; dj = d[j]
        if (di > 0 and dj < 0) or (di < 0 and dj > 0):
            den = di - dj
            for k in range(3):
                out[cnt].c[k] = di * T[j][k] - dj * T[i][k]
            out[cnt].d = den
            if den < 0:
                for k in range(3):
                    out[cnt].c[k] = -out[cnt].c[k]
                out[cnt].d = -den
            cnt += 1
    return cnt


cdef inline bint less(const Rat* p, const Rat* q, int k) noexcept nogil:
    return p.c[k] * q.d < q.c[k] * p.d


cdef inline void cross128(const i128* u, const i128* v, i128* out) noexcept nogil:
    out[0] = u[1] * v[2] - u[2] * v[1]
    out[1] = u[2] * v[0] - u[0] * v[2]
    out[2] = u[0] * v[1] - u[1] * v[0]


cdef double tri_pair_length(const int64_t** A, const int64_t** B) noexcept nogil:
    cdef i128 dA[3]
    cdef i128 dB[3]
    dB[0] = orient(A[0], A[1], A[2], B[0])
    dB[1] = orient(A[0], A[1], A[2], B[1])
    dB[2] = orient(A[0], A[1], A[2], B[2])
    if (dB[0] > 0 and dB[1] > 0 and dB[2] > 0) or (dB[0] < 0 and dB[1] < 0 and dB[2] < 0):
        return 0.0
    if dB[0] == 0 and dB[1] == 0 and dB[2] == 0:
        return 0.0
    dA[0] = orient(B[0], B[1], B[2], A[0])
    dA[1] = orient(B[0], B[1], B[2], A[1])
    dA[2] = orient(B[0], B[1], B[2], A[2])
    if (dA[0] > 0 and dA[1] > 0 and dA[2] > 0) or (dA[0] < 0 and dA[1] < 0 and dA[2] < 0):
        return 0.0
    cdef i128 ea[3]
    cdef i128 fa[3]
    cdef i128 eb[3]
    cdef i128 fb[3]
    cdef i128 nA[3]
    cdef i128 nB[3]
    cdef i128 u[3]
    cdef int k, q
    for q in range(3):
        ea[q] = A[1][q] - A[0][q]
        fa[q] = A[2][q] - A[0][q]
        eb[q] = B[1][q] - B[0][q]
        fb[q] = B[2][q] - B[0][q]
    cross128(ea, fa, nA)
    cross128(eb, fb, nB)
    cross128(nA, nB, u)
    cdef i128 au0 = u[0] if u[0] >= 0 else -u[0]
    cdef i128 au1 = u[1] if u[1] >= 0 else -u[1]
    cdef i128 au2 = u[2] if u[2] >= 0 else -u[2]
    if au0 >= au1 and au0 >= au2:
        k = 0
    elif au1 >= au2:
        k = 1
    else:
        k = 2
    cdef Rat ca[4]
    cdef Rat cb[4]
    cdef int na = chord(A, dA, ca)
    cdef int nb = chord(B, dB, cb)
    cdef Rat* loA = &ca[0]
    cdef Rat* hiA = &ca[0]
    cdef Rat* loB = &cb[0]
    cdef Rat* hiB = &cb[0]
    for q in range(1, na):
        if less(&ca[q], loA, k):
            loA = &ca[q]
        if less(hiA, &ca[q], k):
            hiA = &ca[q]
    for q in range(1, nb):
        if less(&cb[q], loB, k):
            loB = &cb[q]
        if less(hiB, &cb[q], k):
            hiB = &cb[q]
    cdef Rat* lo = loB if less(loA, loB, k) else loA
    cdef Rat* hi = hiB if less(hiB, hiA, k) else hiA
    if not less(lo, hi, k):
        return 0.0
    cdef double dl = <double>lo.d
    cdef double dh = <double>hi.d
    cdef double dx = <double>hi.c[0] / dh - <double>lo.c[0] / dl
    cdef double dy = <double>hi.c[1] / dh - <double>lo.c[1] / dl
    cdef double dz = <double>hi.c[2] / dh - <double>lo.c[2] / dl
    cdef double length = sqrt(dx * dx + dy * dy + dz * dz)
    return length if length > 0.0 else DBL_MIN_


# Python-visible predicates ---------------------------------------------------

cdef void _load(object p, int64_t* out):
    out[0] = p[0]; out[1] = p[1]; out[2] = p[2]


def orientation(a, b, c, d):
    cdef int64_t pa[3]
    cdef int64_t pb[3]
    cdef int64_t pc[3]
    cdef int64_t pd[3]
    _load(a, pa); _load(b, pb); _load(c, pc); _load(d, pd)
    cdef i128 v = orient(pa, pb, pc, pd)
    return (v > 0) - (v < 0)


def point_in_triangle(p, a, b, c):
    cdef int64_t pp[3]
    cdef int64_t pa[3]
    cdef int64_t pb[3]
    cdef int64_t pc[3]
    _load(p, pp); _load(a, pa); _load(b, pb); _load(c, pc)
    return c_point_in_triangle(pp, pa, pb, pc)


def segments_intersect(p, q, r, s):
    cdef int64_t pp[3]
    cdef int64_t pq[3]
    cdef int64_t pr[3]
    cdef int64_t ps[3]
    _load(p, pp); _load(q, pq); _load(r, pr); _load(s, ps)
    return c_segments_intersect(pp, pq, pr, ps)


def pair_length(t1, t2):
    cdef int64_t a[3][3]
    cdef int64_t b[3][3]
    cdef const int64_t* A[3]
    cdef const int64_t* B[3]
    cdef int i
    for i in range(3):
        _load(t1[i], a[i])
        _load(t2[i], b[i])
        A[i] = a[i]
        B[i] = b[i]
    return tri_pair_length(A, B)


def _i32(x, shape=None):
    a = np.ascontiguousarray(np.asarray(x, dtype=np.int32))
    return a if shape is None else a.reshape(shape)


def _i64(x, shape=None):
    a = np.ascontiguousarray(np.asarray(x, dtype=np.int64))
    return a if shape is None else a.reshape(shape)


cdef class Walker:
    """One search instance: coordinates, pair-length cache, random stream."""

    cdef int n, n_tris, n_pairs, n_reps, n_moves, n_group, n_quads, n_eps
    cdef int64_t* P
    cdef int32_t* tris
    cdef int32_t* pairs
    cdef int32_t* vp_ptr
    cdef int32_t* vp_idx
    cdef int32_t* rep_ptr
    cdef int32_t* orb_vert
    cdef int64_t* orb_mat
    cdef int32_t* basis_ptr
    cdef int64_t* basis_vec
    cdef int32_t* move_rep
    cdef int64_t* move_vec
    cdef int32_t* group_perm
    cdef int64_t* group_mat
    cdef int32_t* quads
    cdef int32_t* eps
    cdef double* plen
    cdef int64_t* stamp
    cdef int64_t epoch
    cdef int32_t* order
    cdef char* mask
    cdef int64_t* saved_c      # (vertex, x, y, z) records
    cdef int n_saved_c
    cdef int32_t* saved_k
    cdef double* saved_v
    cdef int n_saved_len
    cdef bitgen_t* rng
    cdef object _keep
    cdef object bitgen

    cdef public bint relaxed, debug
    cdef public int64_t inner_half, outer_half
    cdef public double restart_ratio
    cdef public double total
    cdef public int64_t steps, restarts

    def __init__(self, coords, tris, edges, pairs, rep_ptr, orb_vert, orb_mat,
                 basis_ptr, basis_vec, move_rep, move_vec, group_perm, group_mat,
                 relaxed, inner_half, outer_half, restart_ratio, bitgen, debug=False):
        if not 0 <= inner_half <= outer_half <= KERNEL_COORD_LIMIT:
            raise ValueError("need 0 <= inner_half <= outer_half <= 2**16")
        P = _i64(coords).reshape(-1, 3).copy()
        n = P.shape[0]
        tris_a = _i32(tris, (-1, 3))
        edges_a = _i32(edges, (-1, 2))
        pairs_a = _i32(pairs, (-1, 2))
        vlists = [[] for _ in range(n)]
        tl = tris_a.tolist()
        for k, (i, j) in enumerate(pairs_a.tolist()):
            for v in sorted(set(tl[i]) | set(tl[j])):
                vlists[v].append(k)
        vp_ptr = _i32(np.cumsum([0] + [len(x) for x in vlists]))
        vp_idx = _i32([k for x in vlists for k in x])
        quads = _i32(list(itertools.combinations(range(n), 4)), (-1, 4))
        el = [tuple(e) for e in edges_a.tolist()]
        eps = _i32([e + f for e, f in itertools.combinations(el, 2) if not set(e) & set(f)], (-1, 4))
        arrays = dict(
            P=P, tris=tris_a, pairs=pairs_a, vp_ptr=vp_ptr, vp_idx=vp_idx,
            rep_ptr=_i32(rep_ptr), orb_vert=_i32(orb_vert), orb_mat=_i64(orb_mat, (-1, 9)),
            basis_ptr=_i32(basis_ptr), basis_vec=_i64(basis_vec, (-1, 3)),
            move_rep=_i32(move_rep), move_vec=_i64(move_vec, (-1, 3)),
            group_perm=_i32(group_perm, (-1, n)), group_mat=_i64(group_mat, (-1, 9)),
            quads=quads, eps=eps,
            plen=np.zeros(len(pairs_a), dtype=np.float64),
            stamp=np.zeros(len(pairs_a), dtype=np.int64),
            order=np.zeros(max(1, len(move_rep)), dtype=np.int32),
            mask=np.zeros(n, dtype=np.int8),
            saved_c=np.zeros(4 * n, dtype=np.int64),
            saved_k=np.zeros(max(1, len(pairs_a)), dtype=np.int32),
            saved_v=np.zeros(max(1, len(pairs_a)), dtype=np.float64),
        )
        self._keep = arrays
        self.n = n
        self.n_tris = tris_a.shape[0]
        self.n_pairs = pairs_a.shape[0]
        self.n_reps = len(rep_ptr) - 1
        self.n_moves = len(move_rep)
        self.n_group = arrays["group_perm"].shape[0]
        self.n_quads = quads.shape[0]
        self.n_eps = eps.shape[0]
        self.P = <int64_t*> cnp.PyArray_DATA(P)
        self.tris = <int32_t*> cnp.PyArray_DATA(tris_a)
        self.pairs = <int32_t*> cnp.PyArray_DATA(pairs_a)
        self.vp_ptr = <int32_t*> cnp.PyArray_DATA(vp_ptr)
        self.vp_idx = <int32_t*> cnp.PyArray_DATA(vp_idx)
        self.rep_ptr = <int32_t*> cnp.PyArray_DATA(arrays["rep_ptr"])
        self.orb_vert = <int32_t*> cnp.PyArray_DATA(arrays["orb_vert"])
        self.orb_mat = <int64_t*> cnp.PyArray_DATA(arrays["orb_mat"])
        self.basis_ptr = <int32_t*> cnp.PyArray_DATA(arrays["basis_ptr"])
        self.basis_vec = <int64_t*> cnp.PyArray_DATA(arrays["basis_vec"])
        self.move_rep = <int32_t*> cnp.PyArray_DATA(arrays["move_rep"])
        self.move_vec = <int64_t*> cnp.PyArray_DATA(arrays["move_vec"])
        self.group_perm = <int32_t*> cnp.PyArray_DATA(arrays["group_perm"])
        self.group_mat = <int64_t*> cnp.PyArray_DATA(arrays["group_mat"])
        self.quads = <int32_t*> cnp.PyArray_DATA(quads)
        self.eps = <int32_t*> cnp.PyArray_DATA(eps)
        self.plen = <double*> cnp.PyArray_DATA(arrays["plen"])
        self.stamp = <int64_t*> cnp.PyArray_DATA(arrays["stamp"])
        self.order = <int32_t*> cnp.PyArray_DATA(arrays["order"])
        self.mask = <char*> cnp.PyArray_DATA(arrays["mask"])
        self.saved_c = <int64_t*> cnp.PyArray_DATA(arrays["saved_c"])
        self.saved_k = <int32_t*> cnp.PyArray_DATA(arrays["saved_k"])
        self.saved_v = <double*> cnp.PyArray_DATA(arrays["saved_v"])
        self.epoch = 0
        self.bitgen = bitgen
        self.rng = <bitgen_t*> PyCapsule_GetPointer(bitgen.capsule, "BitGenerator")
        self.relaxed = relaxed
        self.debug = debug
        self.inner_half = inner_half
        self.outer_half = outer_half
        self.restart_ratio = restart_ratio
        self.total = -1.0
        self.steps = 0
        self.restarts = 0

    # random stream ---------------------------------------------------------
    cdef inline uint64_t _next(self) noexcept nogil:
        return self.rng.next_uint64(self.rng.state)

    cdef inline int64_t _bounded(self, uint64_t k) noexcept nogil:
        return <int64_t>(((self._next() >> 32) * k) >> 32)

    cdef inline double _uniform(self) noexcept nogil:
        return <double>(self._next() >> 11) * (1.0 / 9007199254740992.0)

    # position requirement --------------------------------------------------
    cdef bint _position_ok(self) noexcept nogil:
        cdef int64_t* P = self.P
        cdef char* mask = self.mask
        cdef int q, v, w, t, a, b, c
        cdef int32_t* x
        if not self.relaxed:
            for q in range(self.n_quads):
                x = &self.quads[4 * q]
                if mask[x[0]] or mask[x[1]] or mask[x[2]] or mask[x[3]]:
                    if orient(&P[3 * x[0]], &P[3 * x[1]], &P[3 * x[2]], &P[3 * x[3]]) == 0:
                        return False
            return True
        for v in range(self.n):
            if mask[v]:
                for w in range(self.n):
                    if w != v and same(&P[3 * v], &P[3 * w]):
                        return False
        cdef bint tm
        for t in range(self.n_tris):
            a = self.tris[3 * t]; b = self.tris[3 * t + 1]; c = self.tris[3 * t + 2]
            tm = mask[a] or mask[b] or mask[c]
            for v in range(self.n):
                if v == a or v == b or v == c:
                    continue
                if (tm or mask[v]) and c_point_in_triangle(&P[3 * v], &P[3 * a], &P[3 * b], &P[3 * c]):
                    return False
        for q in range(self.n_eps):
            x = &self.eps[4 * q]
            if mask[x[0]] or mask[x[1]] or mask[x[2]] or mask[x[3]]:
                if c_segments_intersect(&P[3 * x[0]], &P[3 * x[1]], &P[3 * x[2]], &P[3 * x[3]]):
                    return False
        return True

    cdef void _mask_all(self, char value) noexcept nogil:
        cdef int v
        for v in range(self.n):
            self.mask[v] = value

    def position_ok(self):
        self._mask_all(1)
        return self._position_ok()

    # objective -------------------------------------------------------------
    cdef double _length(self, int k) noexcept nogil:
        cdef int i = self.pairs[2 * k], j = self.pairs[2 * k + 1]
        cdef const int64_t* A[3]
        cdef const int64_t* B[3]
        cdef int q
        for q in range(3):
            A[q] = &self.P[3 * self.tris[3 * i + q]]
            B[q] = &self.P[3 * self.tris[3 * j + q]]
        return tri_pair_length(A, B)

    cdef double _sum(self) noexcept nogil:
        cdef double total = 0.0
        cdef int k
        for k in range(self.n_pairs):
            total += self.plen[k]
        return total

    def evaluate_full(self):
        cdef int k
        for k in range(self.n_pairs):
            self.plen[k] = self._length(k)
        self.total = self._sum()
        return self.total

    cdef double _update_lengths(self, int r) noexcept nogil:
        cdef int q, w, p, k
        self.epoch += 1
        self.n_saved_len = 0
        for q in range(self.rep_ptr[r], self.rep_ptr[r + 1]):
            w = self.orb_vert[q]
            for p in range(self.vp_ptr[w], self.vp_ptr[w + 1]):
                k = self.vp_idx[p]
                if self.stamp[k] != self.epoch:
                    self.stamp[k] = self.epoch
                    self.saved_k[self.n_saved_len] = k
                    self.saved_v[self.n_saved_len] = self.plen[k]
                    self.n_saved_len += 1
                    self.plen[k] = self._length(k)
        return self._sum()

    cdef void _revert_lengths(self) noexcept nogil:
        cdef int q
        for q in range(self.n_saved_len):
            self.plen[self.saved_k[q]] = self.saved_v[q]

    # moves -----------------------------------------------------------------
    cdef bint _apply_move(self, int mi) noexcept nogil:
        """Apply move ``mi`` to its orbit and set the moved mask; False if out of box."""
        cdef int r = self.move_rep[mi]
        cdef int rep = self.orb_vert[self.rep_ptr[r]]
        cdef int64_t* vec = &self.move_vec[3 * mi]
        cdef int64_t x = self.P[3 * rep] + vec[0]
        cdef int64_t y = self.P[3 * rep + 1] + vec[1]
        cdef int64_t z = self.P[3 * rep + 2] + vec[2]
        cdef int64_t h = self.outer_half
        if not (-h <= x <= h and -h <= y <= h and -h <= z <= h):
            return False
        cdef int q, w
        cdef int64_t* m
        self._mask_all(0)
        self.n_saved_c = 0
        for q in range(self.rep_ptr[r], self.rep_ptr[r + 1]):
            w = self.orb_vert[q]
            m = &self.orb_mat[9 * q]
            self.saved_c[4 * self.n_saved_c] = w
            self.saved_c[4 * self.n_saved_c + 1] = self.P[3 * w]
            self.saved_c[4 * self.n_saved_c + 2] = self.P[3 * w + 1]
            self.saved_c[4 * self.n_saved_c + 3] = self.P[3 * w + 2]
            self.n_saved_c += 1
            self.P[3 * w] = m[0] * x + m[1] * y + m[2] * z
            self.P[3 * w + 1] = m[3] * x + m[4] * y + m[5] * z
            self.P[3 * w + 2] = m[6] * x + m[7] * y + m[8] * z
            self.mask[w] = 1
        return True

    cdef void _revert_coords(self) noexcept nogil:
        cdef int q, w
        for q in range(self.n_saved_c):
            w = <int>self.saved_c[4 * q]
            self.P[3 * w] = self.saved_c[4 * q + 1]
            self.P[3 * w + 1] = self.saved_c[4 * q + 2]
            self.P[3 * w + 2] = self.saved_c[4 * q + 3]

    def is_admissible(self, int mi):
        if not self._apply_move(mi):
            return False
        ok = self._position_ok()
        self._revert_coords()
        return ok

    def move_info(self, int mi):
        cdef int r = self.move_rep[mi]
        return (int(self.orb_vert[self.rep_ptr[r]]),
                (int(self.move_vec[3 * mi]), int(self.move_vec[3 * mi + 1]),
                 int(self.move_vec[3 * mi + 2])))

    # initialization --------------------------------------------------------
    cdef void _place(self) noexcept nogil:
        cdef int64_t h = self.inner_half
        cdef uint64_t span = 2 * h + 1
        cdef int r, b, q, w
        cdef int64_t x, y, z, t
        cdef int64_t* m
        for r in range(self.n_reps):
            x = 0; y = 0; z = 0
            for b in range(self.basis_ptr[r], self.basis_ptr[r + 1]):
                t = self._bounded(span) - h
                x += t * self.basis_vec[3 * b]
                y += t * self.basis_vec[3 * b + 1]
                z += t * self.basis_vec[3 * b + 2]
            for q in range(self.rep_ptr[r], self.rep_ptr[r + 1]):
                w = self.orb_vert[q]
                m = &self.orb_mat[9 * q]
                self.P[3 * w] = m[0] * x + m[1] * y + m[2] * z
                self.P[3 * w + 1] = m[3] * x + m[4] * y + m[5] * z
                self.P[3 * w + 2] = m[6] * x + m[7] * y + m[8] * z

    cdef bint _initialize(self) noexcept nogil:
        cdef int attempt
        for attempt in range(C_INIT_ATTEMPTS):
            self._place()
            self._mask_all(1)
            if self._position_ok():
                return True
        return False

    def initialize(self):
        if self._initialize():
            self.evaluate_full()
            return True
        return False

    def set_coords(self, coords):
        a = _i64(coords).reshape(self.n, 3)
        cdef int v, k
        for v in range(self.n):
            for k in range(3):
                self.P[3 * v + k] = a[v, k]
        self.evaluate_full()

    # descent ---------------------------------------------------------------
    cdef inline bint _decreasing(self, double new) noexcept nogil:
        cdef double cur = self.total
        return new < cur and (cur - new > DECREASE_TOL or new == 0.0)

    cdef bint _restart(self):
        self.restarts += 1
        return self.initialize()

    cdef int _step(self):
        cdef int m = self.n_moves
        cdef int i, j, tmp, q, mi
        cdef int saved = -1
        cdef double new
        for i in range(m):
            self.order[i] = i
        for i in range(m - 1, 0, -1):
            j = <int>self._bounded(i + 1)
            tmp = self.order[i]; self.order[i] = self.order[j]; self.order[j] = tmp
        for q in range(m):
            mi = self.order[q]
            if not self._apply_move(mi):
                continue
            if not self._position_ok():
                self._revert_coords()
                continue
            if saved < 0:
                saved = mi
            new = self._update_lengths(self.move_rep[mi])
            if self._decreasing(new):
                self.total = new
                self.steps += 1
                return C_DESCENT
            self._revert_lengths()
            self._revert_coords()
        self.steps += 1
        if saved >= 0:
            if self._uniform() >= self.restart_ratio:
                self._apply_move(saved)
                self.total = self._update_lengths(self.move_rep[saved])
                return C_PLATEAU
        return C_RESTART if self._restart() else C_DEADEND

    def step(self):
        return self._step()

    def symmetry_ok(self):
        cdef int g, v, w
        cdef int64_t x, y, z
        cdef int64_t* m
        for g in range(self.n_group):
            m = &self.group_mat[9 * g]
            for v in range(self.n):
                w = self.group_perm[g * self.n + v]
                x = self.P[3 * v]; y = self.P[3 * v + 1]; z = self.P[3 * v + 2]
                if (self.P[3 * w] != m[0] * x + m[1] * y + m[2] * z
                        or self.P[3 * w + 1] != m[3] * x + m[4] * y + m[5] * z
                        or self.P[3 * w + 2] != m[6] * x + m[7] * y + m[8] * z):
                    return False
        return True

    def _debug_check(self):
        if not self.symmetry_ok():
            raise AssertionError(f"symmetry invariant broken after step {self.steps}")
        if not self.position_ok():
            raise AssertionError(f"position requirement broken after step {self.steps}")
        cdef int i
        for i in range(3 * self.n):
            if self.P[i] > self.outer_half or self.P[i] < -self.outer_half:
                raise AssertionError(f"outer box left after step {self.steps}")

    def run(self, int64_t max_steps, trace_kind=None, trace_value=None):
        cdef int kind
        cdef signed char[::1] tk
        cdef double[::1] tv
        cdef bint tracing = trace_kind is not None
        if tracing:
            tk = trace_kind
            tv = trace_value
        if self.total < 0.0:
            self.evaluate_full()
        while self.total > 0.0 and self.steps < max_steps:
            kind = self._step()
            if kind == C_DEADEND:
                return INIT_FAILED
            if tracing:
                tk[self.steps - 1] = kind
                tv[self.steps - 1] = self.total
            if self.debug:
                self._debug_check()
        return REALIZED if self.total == 0.0 else EXHAUSTED

    # inspection ------------------------------------------------------------
    @property
    def n_moves(self):
        return self.n_moves

    @property
    def coords(self):
        return self._keep["P"].copy()

    @property
    def pair_lengths(self):
        return self._keep["plen"].copy()
