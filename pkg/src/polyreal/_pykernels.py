"""Pure-Python search kernel.

Mirrors ``_kernels.pyx`` operation for operation: same integer predicates,
same floating-point expression order, same consumption of the random
stream. Given equal inputs both backends produce identical trajectories.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

BACKEND = "python"

KERNEL_COORD_LIMIT = 2**16
INIT_ATTEMPTS = 10_000
DECREASE_TOL = 1e-9
DBL_MIN = 2.2250738585072014e-308

DESCENT, PLATEAU, RESTART, DEADEND = 0, 1, 2, 3
REALIZED, EXHAUSTED, INIT_FAILED = 0, 1, 2

_EDGES3 = ((0, 1), (1, 2), (0, 2))


def _orient(a, b, c, d) -> int:
    bx, by, bz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    cx, cy, cz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    dx, dy, dz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _on_segment(p, a, b) -> bool:
    abx, aby, abz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    apx, apy, apz = p[0] - a[0], p[1] - a[1], p[2] - a[2]
    if abx == 0 and aby == 0 and abz == 0:
        return apx == 0 and apy == 0 and apz == 0
    if aby * apz - abz * apy or abz * apx - abx * apz or abx * apy - aby * apx:
        return False
    t = apx * abx + apy * aby + apz * abz
    return 0 <= t <= abx * abx + aby * aby + abz * abz


def _drop(n):
    ax, ay, az = abs(n[0]), abs(n[1]), abs(n[2])
    if ax >= ay and ax >= az:
        return 1, 2
    if ay >= az:
        return 0, 2
    return 0, 1


def _o2(p, q, r, i, j) -> int:
    v = (q[i] - p[i]) * (r[j] - p[j]) - (q[j] - p[j]) * (r[i] - p[i])
    return (v > 0) - (v < 0)


def point_in_triangle(p, a, b, c) -> bool:
    if _orient(a, b, c, p) != 0:
        return False
    n = _cross((b[0] - a[0], b[1] - a[1], b[2] - a[2]), (c[0] - a[0], c[1] - a[1], c[2] - a[2]))
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        return _on_segment(p, a, b) or _on_segment(p, b, c) or _on_segment(p, a, c)
    i, j = _drop(n)
    s1, s2, s3 = _o2(a, b, p, i, j), _o2(b, c, p, i, j), _o2(c, a, p, i, j)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


def segments_intersect(p, q, r, s) -> bool:
    if p[0] == q[0] and p[1] == q[1] and p[2] == q[2]:
        return _on_segment(p, r, s)
    if r[0] == s[0] and r[1] == s[1] and r[2] == s[2]:
        return _on_segment(r, p, q)
    if _orient(p, q, r, s) != 0:
        return False
    u = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
    n = _cross(u, (r[0] - p[0], r[1] - p[1], r[2] - p[2]))
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        n = _cross(u, (s[0] - p[0], s[1] - p[1], s[2] - p[2]))
    if n[0] == 0 and n[1] == 0 and n[2] == 0:
        return (_on_segment(p, r, s) or _on_segment(q, r, s)
                or _on_segment(r, p, q) or _on_segment(s, p, q))
    i, j = _drop(n)
    d1, d2 = _o2(r, s, p, i, j), _o2(r, s, q, i, j)
    d3, d4 = _o2(p, q, r, i, j), _o2(p, q, s, i, j)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return ((d1 == 0 and _on_segment(p, r, s)) or (d2 == 0 and _on_segment(q, r, s))
            or (d3 == 0 and _on_segment(r, p, q)) or (d4 == 0 and _on_segment(s, p, q)))


def orientation(a, b, c, d) -> int:
    v = _orient(a, b, c, d)
    return (v > 0) - (v < 0)


def _chord(T, d, out):
    """Append (N, D) rationals where triangle T meets the plane; D > 0."""
    for i in range(3):
        if d[i] == 0:
            out.append((T[i][0], T[i][1], T[i][2], 1))
    for i, j in _EDGES3:
        di, dj = d[i], d[j]
        if (di > 0 and dj < 0) or (di < 0 and dj > 0):
            den = di - dj
            nx = di * T[j][0] - dj * T[i][0]
            ny = di * T[j][1] - dj * T[i][1]
            nz = di * T[j][2] - dj * T[i][2]
            if den < 0:
                nx, ny, nz, den = -nx, -ny, -nz, -den
            out.append((nx, ny, nz, den))


def _less(p, q, k) -> bool:
    return p[k] * q[3] < q[k] * p[3]


def tri_pair_length(A, B) -> float:
    """Length of the intersection of triangles A and B (vertex coordinate triples).

    Endpoint order decisions are exact; only the final distance is floating.
    """
    dB = (_orient(A[0], A[1], A[2], B[0]), _orient(A[0], A[1], A[2], B[1]),
          _orient(A[0], A[1], A[2], B[2]))
    if (dB[0] > 0 and dB[1] > 0 and dB[2] > 0) or (dB[0] < 0 and dB[1] < 0 and dB[2] < 0):
        return 0.0
    if dB[0] == 0 and dB[1] == 0 and dB[2] == 0:
        return 0.0
    dA = (_orient(B[0], B[1], B[2], A[0]), _orient(B[0], B[1], B[2], A[1]),
          _orient(B[0], B[1], B[2], A[2]))
    if (dA[0] > 0 and dA[1] > 0 and dA[2] > 0) or (dA[0] < 0 and dA[1] < 0 and dA[2] < 0):
        return 0.0
    nA = _cross((A[1][0] - A[0][0], A[1][1] - A[0][1], A[1][2] - A[0][2]),
                (A[2][0] - A[0][0], A[2][1] - A[0][1], A[2][2] - A[0][2]))
    nB = _cross((B[1][0] - B[0][0], B[1][1] - B[0][1], B[1][2] - B[0][2]),
                (B[2][0] - B[0][0], B[2][1] - B[0][1], B[2][2] - B[0][2]))
    u = _cross(nA, nB)
    au0, au1, au2 = abs(u[0]), abs(u[1]), abs(u[2])
    if au0 >= au1 and au0 >= au2:
        k = 0
    elif au1 >= au2:
        k = 1
    else:
        k = 2
    ca: list = []
    cb: list = []
    _chord(A, dA, ca)
    _chord(B, dB, cb)
    loA = hiA = ca[0]
    for p in ca[1:]:
        if _less(p, loA, k):
            loA = p
        if _less(hiA, p, k):
            hiA = p
    loB = hiB = cb[0]
    for p in cb[1:]:
        if _less(p, loB, k):
            loB = p
        if _less(hiB, p, k):
            hiB = p
    lo = loB if _less(loA, loB, k) else loA
    hi = hiB if _less(hiB, hiA, k) else hiA
    if not _less(lo, hi, k):
        return 0.0
    dl, dh = float(lo[3]), float(hi[3])
    dx = float(hi[0]) / dh - float(lo[0]) / dl
    dy = float(hi[1]) / dh - float(lo[1]) / dl
    dz = float(hi[2]) / dh - float(lo[2]) / dl
    length = math.sqrt(dx * dx + dy * dy + dz * dz)
    return length if length > 0.0 else DBL_MIN


def pair_length(t1, t2) -> float:
    A = [tuple(int(x) for x in p) for p in t1]
    B = [tuple(int(x) for x in p) for p in t2]
    return tri_pair_length(A, B)


class Walker:
    """One search instance: coordinates, pair-length cache, random stream."""

    def __init__(self, coords, tris, edges, pairs, rep_ptr, orb_vert, orb_mat,
                 basis_ptr, basis_vec, move_rep, move_vec, group_perm, group_mat,
                 relaxed, inner_half, outer_half, restart_ratio, bitgen, debug=False):
        if not 0 <= inner_half <= outer_half <= KERNEL_COORD_LIMIT:
            raise ValueError("need 0 <= inner_half <= outer_half <= 2**16")
        self.n = n = len(coords)
        self.P = [[int(x) for x in p] for p in coords]
        self.tris = [tuple(int(v) for v in t) for t in tris]
        self.edges = [tuple(int(v) for v in e) for e in edges]
        self.pairs = [tuple(int(v) for v in p) for p in pairs]
        self.rep_ptr = [int(x) for x in rep_ptr]
        self.orb_vert = [int(x) for x in orb_vert]
        self.orb_mat = [[int(x) for x in m] for m in orb_mat]
        self.basis_ptr = [int(x) for x in basis_ptr]
        self.basis_vec = [[int(x) for x in b] for b in basis_vec]
        self.move_rep = [int(x) for x in move_rep]
        self.move_vec = [[int(x) for x in v] for v in move_vec]
        self.group_perm = [[int(x) for x in p] for p in group_perm]
        self.group_mat = [[int(x) for x in m] for m in group_mat]
        self.relaxed = bool(relaxed)
        self.inner_half = int(inner_half)
        self.outer_half = int(outer_half)
        self.restart_ratio = float(restart_ratio)
        self.bitgen = bitgen
        self.debug = bool(debug)
        self.n_reps = len(self.rep_ptr) - 1
        self.n_moves = len(self.move_rep)

        self.vpairs = [[] for _ in range(n)]
        for k, (i, j) in enumerate(self.pairs):
            for v in sorted(set(self.tris[i]) | set(self.tris[j])):
                self.vpairs[v].append(k)
        self.quads = list(itertools.combinations(range(n), 4))
        self.edge_pairs = [
            (e, f) for e, f in itertools.combinations(self.edges, 2) if not set(e) & set(f)
        ]
        self.plen = [0.0] * len(self.pairs)
        self.total = -1.0
        self.steps = 0
        self.restarts = 0
        self.stamp = [0] * len(self.pairs)
        self.epoch = 0
        self._saved_coords: list = []
        self._saved_len: list = []

    # random stream ---------------------------------------------------------
    def _next(self) -> int:
        return int(self.bitgen.random_raw())

    def _bounded(self, k: int) -> int:
        return ((self._next() >> 32) * k) >> 32

    def _uniform(self) -> float:
        return (self._next() >> 11) * (1.0 / 9007199254740992.0)

    # position requirement --------------------------------------------------
    def _position_ok(self, mask) -> bool:
        P = self.P
        if not self.relaxed:
            for i, j, k, l in self.quads:
                if mask[i] or mask[j] or mask[k] or mask[l]:
                    if _orient(P[i], P[j], P[k], P[l]) == 0:
                        return False
            return True
        n = self.n
        for v in range(n):
            if mask[v]:
                pv = P[v]
                for w in range(n):
                    if w != v and P[w][0] == pv[0] and P[w][1] == pv[1] and P[w][2] == pv[2]:
                        return False
        for t in self.tris:
            tm = mask[t[0]] or mask[t[1]] or mask[t[2]]
            a, b, c = P[t[0]], P[t[1]], P[t[2]]
            for v in range(n):
                if v == t[0] or v == t[1] or v == t[2]:
                    continue
                if (tm or mask[v]) and point_in_triangle(P[v], a, b, c):
                    return False
        for e, f in self.edge_pairs:
            if mask[e[0]] or mask[e[1]] or mask[f[0]] or mask[f[1]]:
                if segments_intersect(P[e[0]], P[e[1]], P[f[0]], P[f[1]]):
                    return False
        return True

    def position_ok(self) -> bool:
        return self._position_ok([True] * self.n)

    # objective -------------------------------------------------------------
    def _length(self, k: int) -> float:
        i, j = self.pairs[k]
        P = self.P
        ti, tj = self.tris[i], self.tris[j]
        return tri_pair_length((P[ti[0]], P[ti[1]], P[ti[2]]), (P[tj[0]], P[tj[1]], P[tj[2]]))

    def _sum(self) -> float:
        total = 0.0
        for x in self.plen:
            total += x
        return total

    def evaluate_full(self) -> float:
        for k in range(len(self.pairs)):
            self.plen[k] = self._length(k)
        self.total = self._sum()
        return self.total

    def _update_lengths(self, moved) -> float:
        self.epoch += 1
        saved = self._saved_len
        saved.clear()
        for v in moved:
            for k in self.vpairs[v]:
                if self.stamp[k] != self.epoch:
                    self.stamp[k] = self.epoch
                    saved.append((k, self.plen[k]))
                    self.plen[k] = self._length(k)
        return self._sum()

    def _revert_lengths(self) -> None:
        for k, x in self._saved_len:
            self.plen[k] = x

    # moves -----------------------------------------------------------------
    def _apply_move(self, mi: int):
        """Apply move ``mi`` and adapt its orbit; None (and reverted) if out of box."""
        r = self.move_rep[mi]
        vec = self.move_vec[mi]
        rep = self.orb_vert[self.rep_ptr[r]]
        pr = self.P[rep]
        x, y, z = pr[0] + vec[0], pr[1] + vec[1], pr[2] + vec[2]
        h = self.outer_half
        if not (-h <= x <= h and -h <= y <= h and -h <= z <= h):
            return None
        saved = self._saved_coords
        saved.clear()
        moved = []
        for q in range(self.rep_ptr[r], self.rep_ptr[r + 1]):
            w = self.orb_vert[q]
            m = self.orb_mat[q]
            saved.append((w, self.P[w]))
            self.P[w] = [m[0] * x + m[1] * y + m[2] * z,
                         m[3] * x + m[4] * y + m[5] * z,
                         m[6] * x + m[7] * y + m[8] * z]
            moved.append(w)
        return moved

    def _revert_coords(self) -> None:
        for w, p in self._saved_coords:
            self.P[w] = p

    def _mask(self, moved):
        mask = [False] * self.n
        for w in moved:
            mask[w] = True
        return mask

    def is_admissible(self, mi: int) -> bool:
        moved = self._apply_move(mi)
        if moved is None:
            return False
        ok = self._position_ok(self._mask(moved))
        self._revert_coords()
        return ok

    def move_info(self, mi: int):
        r = self.move_rep[mi]
        return self.orb_vert[self.rep_ptr[r]], tuple(self.move_vec[mi])

    # initialization --------------------------------------------------------
    def _place(self) -> None:
        h = self.inner_half
        span = 2 * h + 1
        for r in range(self.n_reps):
            x = y = z = 0
            for b in range(self.basis_ptr[r], self.basis_ptr[r + 1]):
                t = self._bounded(span) - h
                bv = self.basis_vec[b]
                x += t * bv[0]
                y += t * bv[1]
                z += t * bv[2]
            for q in range(self.rep_ptr[r], self.rep_ptr[r + 1]):
                m = self.orb_mat[q]
                self.P[self.orb_vert[q]] = [m[0] * x + m[1] * y + m[2] * z,
                                            m[3] * x + m[4] * y + m[5] * z,
                                            m[6] * x + m[7] * y + m[8] * z]

    def initialize(self) -> bool:
        everything = [True] * self.n
        for _ in range(INIT_ATTEMPTS):
            self._place()
            if self._position_ok(everything):
                self.evaluate_full()
                return True
        return False

    def set_coords(self, coords) -> None:
        self.P = [[int(x) for x in p] for p in coords]
        self.evaluate_full()

    # descent ---------------------------------------------------------------
    def _decreasing(self, new: float) -> bool:
        cur = self.total
        return new < cur and (cur - new > DECREASE_TOL or new == 0.0)

    def _restart(self) -> bool:
        self.restarts += 1
        return self.initialize()

    def step(self) -> int:
        m = self.n_moves
        order = list(range(m))
        for i in range(m - 1, 0, -1):
            j = self._bounded(i + 1)
            order[i], order[j] = order[j], order[i]
        saved = -1
        for mi in order:
            moved = self._apply_move(mi)
            if moved is None:
                continue
            if not self._position_ok(self._mask(moved)):
                self._revert_coords()
                continue
            if saved < 0:
                saved = mi
            new = self._update_lengths(moved)
            if self._decreasing(new):
                self.total = new
                self.steps += 1
                return DESCENT
            self._revert_lengths()
            self._revert_coords()
        self.steps += 1
        if saved >= 0:
            if self._uniform() >= self.restart_ratio:
                moved = self._apply_move(saved)
                self.total = self._update_lengths(moved)
                return PLATEAU
        return RESTART if self._restart() else DEADEND

    def symmetry_ok(self) -> bool:
        P = self.P
        for perm, m in zip(self.group_perm, self.group_mat):
            for v in range(self.n):
                x, y, z = P[v]
                w = P[perm[v]]
                if (w[0] != m[0] * x + m[1] * y + m[2] * z
                        or w[1] != m[3] * x + m[4] * y + m[5] * z
                        or w[2] != m[6] * x + m[7] * y + m[8] * z):
                    return False
        return True

    def _debug_check(self) -> None:
        if not self.symmetry_ok():
            raise AssertionError(f"symmetry invariant broken after step {self.steps}")
        if not self.position_ok():
            raise AssertionError(f"position requirement broken after step {self.steps}")
        h = self.outer_half
        if any(abs(x) > h for p in self.P for x in p):
            raise AssertionError(f"outer box left after step {self.steps}")

    def run(self, max_steps: int, trace_kind=None, trace_value=None) -> int:
        if self.total < 0.0:
            self.evaluate_full()
        while self.total > 0.0 and self.steps < max_steps:
            kind = self.step()
            if kind == DEADEND:
                return INIT_FAILED
            if trace_kind is not None:
                trace_kind[self.steps - 1] = kind
                trace_value[self.steps - 1] = self.total
            if self.debug:
                self._debug_check()
        return REALIZED if self.total == 0.0 else EXHAUSTED

    # inspection ------------------------------------------------------------
    @property
    def coords(self) -> np.ndarray:
        return np.array(self.P, dtype=np.int64).reshape(self.n, 3)

    @property
    def pair_lengths(self) -> np.ndarray:
        return np.array(self.plen, dtype=np.float64)
