# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled elimination kernels.

Both kernels take a sparse integer matrix in CSR form (``indptr``,
``indices``, ``data``) and reduce a dense working copy row by row.  Pivot
rows are chosen by fewest nonzeros to limit fill-in; row updates only touch
the columns where the pivot row is nonzero.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t lm_mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)(((unsigned __int128)a * b) % p);
    }
    static inline int lm_mul_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int lm_sub_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int lm_add_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static uint64_t lm_invmod(uint64_t a, uint64_t p) {
        __int128 t = 0, nt = 1, r = p, nr = a, q, tmp;
        while (nr != 0) {
            q = r / nr;
            tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p;
        return (uint64_t)t;
    }
    """
    uint64_t lm_mulmod(uint64_t a, uint64_t b, uint64_t p) nogil
    int lm_mul_ovf(int64_t a, int64_t b, int64_t *r) nogil
    int lm_sub_ovf(int64_t a, int64_t b, int64_t *r) nogil
    int lm_add_ovf(int64_t a, int64_t b, int64_t *r) nogil
    uint64_t lm_invmod(uint64_t a, uint64_t p) nogil


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def rank_mod_p(indptr, indices, data, Py_ssize_t nrows, Py_ssize_t ncols, p):
    """Rank of the matrix over the prime field F_p, p < 2**63."""
    if nrows == 0 or ncols == 0:
        return 0
    cdef uint64_t P = p
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const int64_t[::1] dv = np.ascontiguousarray(data, dtype=np.int64)
    cdef uint64_t[:, ::1] M = np.zeros((nrows, ncols), dtype=np.uint64)
    cdef Py_ssize_t[::1] nnz = np.zeros(nrows, dtype=np.intp)
    cdef Py_ssize_t[::1] order = np.arange(nrows, dtype=np.intp)
    cdef Py_ssize_t[::1] pc = np.zeros(ncols, dtype=np.intp)
    cdef Py_ssize_t r, i, j, k, t, col, best, bestnnz, pr, npc, rank = 0
    cdef int64_t d
    cdef uint64_t x, y, nx, inv, fac, b

    with nogil:
        for r in range(nrows):
            for k in range(ip[r], ip[r + 1]):
                d = dv[k]
                if d >= 0:
                    x = (<uint64_t>d) % P
                else:
                    x = (<uint64_t>(-d)) % P
                    if x:
                        x = P - x
                j = ix[k]
                if M[r, j] == 0 and x != 0:
                    nnz[r] += 1
                elif M[r, j] != 0:
                    # duplicate entries are summed
                    y = M[r, j] + x
                    if y >= P or y < x:
                        y = y - P
                    if y == 0:
                        nnz[r] -= 1
                    x = y
                M[r, j] = x

        for col in range(ncols):
            if rank == nrows:
                break
            best = -1
            bestnnz = ncols + 1
            for i in range(rank, nrows):
                r = order[i]
                if M[r, col] != 0 and nnz[r] < bestnnz:
                    best = i
                    bestnnz = nnz[r]
            if best < 0:
                continue
            pr = order[best]
            order[best] = order[rank]
            order[rank] = pr
            npc = 0
            for j in range(col + 1, ncols):
                if M[pr, j] != 0:
                    pc[npc] = j
                    npc += 1
            inv = lm_invmod(M[pr, col], P)
            for i in range(rank + 1, nrows):
                r = order[i]
                b = M[r, col]
                if b == 0:
                    continue
                fac = lm_mulmod(b, inv, P)
                M[r, col] = 0
                nnz[r] -= 1
                for t in range(npc):
                    j = pc[t]
                    x = M[r, j]
                    y = lm_mulmod(fac, M[pr, j], P)
                    if x >= y:
                        nx = x - y
                    else:
                        nx = x + (P - y)
                    if x == 0:
                        if nx != 0:
                            nnz[r] += 1
                    elif nx == 0:
                        nnz[r] -= 1
                    M[r, j] = nx
            rank += 1
    return rank


def rank_integer(indptr, indices, data, Py_ssize_t nrows, Py_ssize_t ncols):
    """Exact rank over Q by fraction-free elimination in int64.

    Returns -1 if an intermediate entry would overflow; callers then redo the
    computation with arbitrary-precision integers.
    """
    if nrows == 0 or ncols == 0:
        return 0
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const int64_t[::1] dv = np.ascontiguousarray(data, dtype=np.int64)
    cdef int64_t[:, ::1] M = np.zeros((nrows, ncols), dtype=np.int64)
    cdef Py_ssize_t[::1] nnz = np.zeros(nrows, dtype=np.intp)
    cdef Py_ssize_t[::1] order = np.arange(nrows, dtype=np.intp)
    cdef Py_ssize_t[::1] pc = np.zeros(ncols, dtype=np.intp)
    cdef Py_ssize_t rank
    with nogil:
        rank = _rank_int_core(ip, ix, dv, M, nnz, order, pc, nrows, ncols)
    return rank


cdef Py_ssize_t _rank_int_core(const int64_t[::1] ip, const int64_t[::1] ix,
                               const int64_t[::1] dv, int64_t[:, ::1] M,
                               Py_ssize_t[::1] nnz, Py_ssize_t[::1] order,
                               Py_ssize_t[::1] pc, Py_ssize_t nrows,
                               Py_ssize_t ncols) noexcept nogil:
    cdef Py_ssize_t r, i, j, k, t, col, best, bestnnz, pr, npc, rank = 0
    cdef int64_t a, b, x, y, nx, fac, g, ma, mb, besta, absv
    cdef bint unit
    for r in range(nrows):
        for k in range(ip[r], ip[r + 1]):
            j = ix[k]
            if M[r, j] != 0:
                nnz[r] -= 1
            if lm_add_ovf(M[r, j], dv[k], &x):
                return -1
            M[r, j] = x
            if x != 0:
                nnz[r] += 1

    for col in range(ncols):
        if rank == nrows:
            break
        best = -1
        bestnnz = ncols + 1
        besta = 0
        for i in range(rank, nrows):
            r = order[i]
            a = M[r, col]
            if a == 0:
                continue
            absv = a if a > 0 else -a
            # prefer unit pivots, then small pivots, then sparse rows
            if (best < 0 or absv < besta
                    or (absv == besta and nnz[r] < bestnnz)):
                best = i
                besta = absv
                bestnnz = nnz[r]
        if best < 0:
            continue
        pr = order[best]
        order[best] = order[rank]
        order[rank] = pr
        a = M[pr, col]
        unit = a == 1 or a == -1
        npc = 0
        for j in range(col + 1, ncols):
            if M[pr, j] != 0:
                pc[npc] = j
                npc += 1
        for i in range(rank + 1, nrows):
            r = order[i]
            b = M[r, col]
            if b == 0:
                continue
            M[r, col] = 0
            nnz[r] -= 1
            if unit:
                fac = b * a
                for t in range(npc):
                    j = pc[t]
                    x = M[r, j]
                    if lm_mul_ovf(fac, M[pr, j], &y):
                        return -1
                    if lm_sub_ovf(x, y, &nx):
                        return -1
                    if x == 0:
                        if nx != 0:
                            nnz[r] += 1
                    elif nx == 0:
                        nnz[r] -= 1
                    M[r, j] = nx
            else:
                g = _gcd(a, b)
                ma = a // g
                mb = b // g
                for j in range(col + 1, ncols):
                    x = M[r, j]
                    y = M[pr, j]
                    if x == 0 and y == 0:
                        continue
                    if lm_mul_ovf(ma, x, &x):
                        return -1
                    if lm_mul_ovf(mb, y, &y):
                        return -1
                    if lm_sub_ovf(x, y, &nx):
                        return -1
                    if M[r, j] == 0:
                        if nx != 0:
                            nnz[r] += 1
                    elif nx == 0:
                        nnz[r] -= 1
                    M[r, j] = nx
                g = 0
                for j in range(col + 1, ncols):
                    if M[r, j] != 0:
                        g = _gcd(g, M[r, j])
                        if g == 1:
                            break
                if g > 1:
                    for j in range(col + 1, ncols):
                        M[r, j] = M[r, j] // g
        rank += 1
    return rank


cdef class _Growth:
    """Canonical growth of face sets toward exact per-edge degree targets.

    Faces and edges are dense indices.  At every node the open edge with the
    fewest admissible faces (ties: smallest edge index) is extended by each
    admissible face in index order.
    """
    cdef const int[:, ::1] fedges
    cdef const int[:, ::1] fverts
    cdef const int[::1] eptr
    cdef const int[::1] eface
    cdef const int[::1] target
    cdef const char[::1] banned
    cdef int min_index, budget, va, vb, nf, nv, maxdeg
    cdef long stamp
    cdef public long nodes
    cdef int[::1] cnt
    cdef int[::1] vcnt
    cdef char[::1] inF
    cdef int[::1] stack
    cdef long[::1] mark
    cdef int[::1] openbuf
    cdef int[::1] candbuf
    cdef object callback

    def __init__(self, fedges, fverts, eptr, eface, target, banned,
                 int min_index, int budget, int va, int vb, int nvertices,
                 callback):
        self.fedges = fedges
        self.fverts = fverts
        self.eptr = eptr
        self.eface = eface
        self.target = target
        self.banned = banned
        self.min_index = min_index
        self.budget = budget
        self.va = va
        self.vb = vb
        ne = len(eptr) - 1
        self.maxdeg = 0
        for e in range(ne):
            if eptr[e + 1] - eptr[e] > self.maxdeg:
                self.maxdeg = eptr[e + 1] - eptr[e]
        self.cnt = np.zeros(ne, dtype=np.int32)
        self.vcnt = np.zeros(nvertices, dtype=np.int32)
        self.inF = np.zeros(len(fedges), dtype=np.int8)
        self.stack = np.zeros(budget + 8, dtype=np.int32)
        self.mark = np.zeros(ne, dtype=np.int64)
        self.openbuf = np.zeros(3 * (budget + 8), dtype=np.int32)
        self.candbuf = np.zeros((budget + 8) * (self.maxdeg + 1), dtype=np.int32)
        self.callback = callback
        self.stamp = 0
        self.nodes = 0
        self.nf = 0
        self.nv = 0

    cdef void _add(self, int f):
        cdef int k, x
        self.stack[self.nf] = f
        self.nf += 1
        self.inF[f] = 1
        for k in range(3):
            self.cnt[self.fedges[f, k]] += 1
            x = self.fverts[f, k]
            if self.vcnt[x] == 0:
                self.nv += 1
            self.vcnt[x] += 1

    cdef void _drop(self):
        cdef int k, x, f
        self.nf -= 1
        f = self.stack[self.nf]
        self.inF[f] = 0
        for k in range(3):
            self.cnt[self.fedges[f, k]] -= 1
            x = self.fverts[f, k]
            self.vcnt[x] -= 1
            if self.vcnt[x] == 0:
                self.nv -= 1

    cdef bint _fits(self, int g):
        cdef int k, e
        if g <= self.min_index or self.inF[g] or self.banned[g]:
            return False
        for k in range(3):
            e = self.fedges[g, k]
            if self.cnt[e] + 1 > self.target[e]:
                return False
        return True

    cdef int _rec(self) except -1:
        cdef int i, k, e, c, t, nopen = 0, deficit = 0
        cdef int best_e = -1, best_c = 0, ncand, j, g, level
        self.nodes += 1
        self.stamp += 1
        for i in range(self.nf):
            for k in range(3):
                e = self.fedges[self.stack[i], k]
                if self.mark[e] != self.stamp:
                    self.mark[e] = self.stamp
                    t = self.target[e]
                    c = self.cnt[e]
                    if c < t:
                        deficit += t - c
                        self.openbuf[nopen] = e
                        nopen += 1
        if self.nf + (deficit + 2) // 3 > self.budget:
            return 0
        if self.va * self.nv + self.vb > self.budget:
            return 0
        if deficit == 0:
            faces = [self.stack[i] for i in range(self.nf)]
            return 1 if self.callback(faces) else 0
        for i in range(nopen):
            e = self.openbuf[i]
            c = 0
            for j in range(self.eptr[e], self.eptr[e + 1]):
                if self._fits(self.eface[j]):
                    c += 1
            if best_e < 0 or c < best_c or (c == best_c and e < best_e):
                best_e = e
                best_c = c
            if c == 0:
                return 0
        level = self.nf
        ncand = 0
        for j in range(self.eptr[best_e], self.eptr[best_e + 1]):
            g = self.eface[j]
            if self._fits(g):
                self.candbuf[level * (self.maxdeg + 1) + ncand] = g
                ncand += 1
        for i in range(ncand):
            g = self.candbuf[level * (self.maxdeg + 1) + i]
            self._add(g)
            c = self._rec()
            self._drop()
            if c:
                return 1
        return 0

    def run(self, start):
        """Grow from the given start faces; True if the callback stopped it."""
        for f in start:
            self._add(f)
        try:
            return bool(self._rec())
        finally:
            while self.nf:
                self._drop()
