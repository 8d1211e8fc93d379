# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels on the packed uint64 adjacency matrix.

Mirrors ``_pykernels`` routine for routine; results (including tie-breaks)
are identical.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memset, memcpy
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    const char* _BUILD_DATE "__DATE__"
    const char* _BUILD_TIME "__TIME__"

BUILD_ID = f"cython {_BUILD_DATE.decode()} {_BUILD_TIME.decode()}"


class LimitExceeded(RuntimeError):
    """Enumeration work exceeded the caller's node limit."""


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil


cdef inline int _popand(const uint64_t* a, const uint64_t* b, Py_ssize_t w) noexcept nogil:
    cdef int total = 0
    cdef Py_ssize_t i
    for i in range(w):
        total += popcount64(a[i] & b[i])
    return total


cdef inline bint _test(const uint64_t* m, Py_ssize_t v) noexcept nogil:
    return (m[v >> 6] >> (v & 63)) & 1


cdef inline void _clear(uint64_t* m, Py_ssize_t v) noexcept nogil:
    m[v >> 6] &= ~((<uint64_t>1) << (v & 63))


cdef inline void _set(uint64_t* m, Py_ssize_t v) noexcept nogil:
    m[v >> 6] |= (<uint64_t>1) << (v & 63)


cdef inline int _count(const uint64_t* m, Py_ssize_t w) noexcept nogil:
    cdef int total = 0
    cdef Py_ssize_t i
    for i in range(w):
        total += popcount64(m[i])
    return total


cdef cnp.ndarray _mask_of(members, Py_ssize_t w):
    cdef cnp.ndarray[uint64_t, ndim=1] out = np.zeros(w, dtype=np.uint64)
    cdef Py_ssize_t v
    for v in members:
        out[v >> 6] |= (<uint64_t>1) << (v & 63)
    return out


def min_degree_vertex(g, members):
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t w = B.shape[1]
    cdef cnp.ndarray[uint64_t, ndim=1] mask = _mask_of(members, w)
    cdef const uint64_t* mp = &mask[0]
    cdef Py_ssize_t v, best = -1
    cdef int d, best_deg = g.n + 1
    for v in members:
        d = _popand(&B[v, 0], mp, w)
        if d < best_deg:
            best = v
            best_deg = d
    return best, best_deg


def greedy_independent_set(g, members):
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t w = B.shape[1]
    cdef cnp.ndarray[uint64_t, ndim=1] alive_arr = _mask_of(members, w)
    cdef uint64_t* alive = &alive_arr[0]
    cdef Py_ssize_t i, v, best
    cdef int d, best_deg, big = g.n + 1
    cdef uint64_t word
    picked = []
    while _count(alive, w):
        best = -1
        best_deg = big
        for i in range(w):
            word = alive[i]
            while word:
                v = (i << 6) + ctz64(word)
                word &= word - 1
                d = _popand(&B[v, 0], alive, w)
                if d < best_deg:
                    best = v
                    best_deg = d
                    if d == 0:
                        break
            if best_deg == 0:
                break
        picked.append(best)
        for i in range(w):
            alive[i] &= ~B[best, i]
        _clear(alive, best)
    return picked


def degeneracy_order(g, members):
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t n = g.n
    cdef Py_ssize_t w = B.shape[1]
    cdef cnp.ndarray[uint64_t, ndim=1] alive_arr = _mask_of(members, w)
    cdef uint64_t* alive = &alive_arr[0]
    cdef cnp.ndarray[int64_t, ndim=1] mem = np.asarray(members, dtype=np.int64)
    cdef Py_ssize_t k = mem.shape[0]
    cdef cnp.ndarray[int64_t, ndim=1] deg = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] order = np.empty(k, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] removal = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t i, j, v, u, best
    cdef int64_t best_deg
    cdef uint64_t word
    for i in range(k):
        v = mem[i]
        deg[v] = _popand(&B[v, 0], alive, w)
    for j in range(k):
        best = -1
        best_deg = n + 1
        for i in range(k):
            v = mem[i]
            if _test(alive, v) and deg[v] < best_deg:
                best = v
                best_deg = deg[v]
        order[j] = best
        removal[j] = best_deg
        _clear(alive, best)
        for i in range(w):
            word = B[best, i] & alive[i]
            while word:
                u = (i << 6) + ctz64(word)
                word &= word - 1
                deg[u] -= 1
    return order.tolist(), removal.tolist()


def color_in_order(g, order):
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t n = g.n
    cdef Py_ssize_t w = B.shape[1]
    cdef cnp.ndarray[int64_t, ndim=1] ordv = np.asarray(order, dtype=np.int64)
    cdef Py_ssize_t k = ordv.shape[0]
    cdef cnp.ndarray[uint64_t, ndim=2] classes = np.zeros((max(k, 1), w), dtype=np.uint64)
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(k, dtype=np.int64)
    cdef Py_ssize_t idx, v, c, i, ncolors = 0
    cdef bint clash
    for idx in range(k):
        v = ordv[idx]
        c = 0
        while c < ncolors:
            clash = False
            for i in range(w):
                if B[v, i] & classes[c, i]:
                    clash = True
                    break
            if not clash:
                break
            c += 1
        if c == ncolors:
            ncolors += 1
        classes[c, v >> 6] |= (<uint64_t>1) << (v & 63)
        out[idx] = c
    return out.tolist()


# -- blossom matching -------------------------------------------------------

cdef class _Blossom:
    cdef int64_t n
    cdef const int64_t[::1] indptr
    cdef const int64_t[::1] indices
    cdef int64_t[::1] mate
    cdef int64_t[::1] parent
    cdef int64_t[::1] base
    cdef int64_t[::1] queue
    cdef int64_t[::1] touched
    cdef int64_t ntouched
    cdef unsigned char[::1] used
    cdef unsigned char[::1] inblossom
    cdef unsigned char[::1] seen

    def __init__(self, indptr, indices, int64_t n):
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.mate = np.full(n, -1, dtype=np.int64)
        self.parent = np.full(n, -1, dtype=np.int64)
        self.base = np.arange(n, dtype=np.int64)
        self.queue = np.empty(max(n, 1), dtype=np.int64)
        self.touched = np.empty(max(n, 1), dtype=np.int64)
        self.ntouched = 0
        self.used = np.zeros(n, dtype=np.uint8)
        self.inblossom = np.zeros(n, dtype=np.uint8)
        self.seen = np.zeros(n, dtype=np.uint8)

    cdef inline void _touch(self, int64_t v) noexcept nogil:
        self.touched[self.ntouched] = v
        self.ntouched += 1

    cdef int64_t _lca(self, int64_t a, int64_t b) noexcept nogil:
        cdef int64_t i, x, res
        # marks live on the touched vertices only
        while True:
            a = self.base[a]
            self.seen[a] = 1
            if self.mate[a] == -1:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if self.seen[b]:
                res = b
                break
            b = self.parent[self.mate[b]]
        for i in range(self.ntouched):
            self.seen[self.touched[i]] = 0
        return res

    cdef void _mark_path(self, int64_t v, int64_t b, int64_t child) noexcept nogil:
        while self.base[v] != b:
            self.inblossom[self.base[v]] = 1
            self.inblossom[self.base[self.mate[v]]] = 1
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    cdef int64_t _find_path(self, int64_t root) noexcept nogil:
        cdef int64_t i, v, to, cur, nxt, head = 0, tail = 0, e, x, nt
        for i in range(self.ntouched):
            x = self.touched[i]
            self.parent[x] = -1
            self.base[x] = x
            self.used[x] = 0
        self.ntouched = 0
        self.used[root] = 1
        self._touch(root)
        self.queue[tail] = root
        tail += 1
        while head < tail:
            v = self.queue[head]
            head += 1
            for e in range(self.indptr[v], self.indptr[v + 1]):
                to = self.indices[e]
                if self.base[v] == self.base[to] or self.mate[v] == to:
                    continue
                if to == root or (self.mate[to] != -1 and self.parent[self.mate[to]] != -1):
                    cur = self._lca(v, to)
                    self._mark_path(v, cur, to)
                    self._mark_path(to, cur, v)
                    nt = self.ntouched
                    for i in range(nt):
                        x = self.touched[i]
                        if self.inblossom[self.base[x]]:
                            self.base[x] = cur
                            if not self.used[x]:
                                self.used[x] = 1
                                self.queue[tail] = x
                                tail += 1
                    for i in range(nt):
                        self.inblossom[self.touched[i]] = 0
                elif self.parent[to] == -1:
                    self.parent[to] = v
                    self._touch(to)
                    if self.mate[to] == -1:
                        return to
                    nxt = self.mate[to]
                    if not self.used[nxt]:
                        self.used[nxt] = 1
                        self._touch(nxt)
                    self.queue[tail] = nxt
                    tail += 1
        return -1

    cdef void run(self) noexcept nogil:
        cdef int64_t v, u, e, root, pv, nxt
        for v in range(self.n):
            if self.mate[v] == -1:
                for e in range(self.indptr[v], self.indptr[v + 1]):
                    u = self.indices[e]
                    if self.mate[u] == -1:
                        self.mate[v] = u
                        self.mate[u] = v
                        break
        for root in range(self.n):
            if self.mate[root] != -1 or self.indptr[root] == self.indptr[root + 1]:
                continue
            v = self._find_path(root)
            while v != -1:
                pv = self.parent[v]
                nxt = self.mate[pv]
                self.mate[v] = pv
                self.mate[pv] = v
                v = nxt


def max_matching(g):
    indptr, indices = g.csr()
    cdef _Blossom b = _Blossom(indptr, indices, g.n)
    b.run()
    return np.asarray(b.mate).tolist()


# -- independent-set counting ----------------------------------------------

cdef int64_t _count_rec(const uint64_t* later, Py_ssize_t w, uint64_t* stack,
                        int need, int64_t* nodes, int64_t limit) noexcept nogil:
    # stack[0:w] holds the candidate set at this depth
    cdef int64_t total = 0, sub
    cdef Py_ssize_t i, j, v
    cdef uint64_t word
    cdef uint64_t* nxt = stack + w
    if need == 1:
        return _count(stack, w)
    if _count(stack, w) < need:
        return 0
    for i in range(w):
        word = stack[i]
        while word:
            v = (i << 6) + ctz64(word)
            word &= word - 1
            nodes[0] += 1
            if nodes[0] > limit:
                return -1
            for j in range(w):
                nxt[j] = stack[j] & later[v * w + j]
            sub = _count_rec(later, w, nxt, need - 1, nodes, limit)
            if sub < 0:
                return -1
            total += sub
    return total


cdef cnp.ndarray _later_masks(const uint64_t[:, ::1] B, Py_ssize_t n, Py_ssize_t w):
    # row v: non-neighbours of v with index above v
    cdef cnp.ndarray[uint64_t, ndim=2] later_arr = np.zeros((max(n, 1), w), dtype=np.uint64)
    cdef Py_ssize_t v, j, lo
    cdef uint64_t m
    for v in range(n):
        for j in range(w):
            lo = j << 6
            if lo + 64 <= v + 1:
                continue
            m = ~B[v, j]
            if lo <= v:
                m &= ~(((<uint64_t>2) << (v - lo)) - 1) if v - lo < 63 else 0
            if lo + 64 > n:
                m &= ((<uint64_t>1) << (n - lo)) - 1
            later_arr[v, j] = m
    return later_arr


def count_independent_sets(g, int size, int64_t limit):
    cdef Py_ssize_t n = g.n
    if size <= 0:
        return 1
    if size == 1:
        return n
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t w = B.shape[1]
    cdef Py_ssize_t v
    cdef cnp.ndarray[uint64_t, ndim=2] later_arr = _later_masks(B, n, w)
    cdef const uint64_t* later = &later_arr[0, 0]
    cdef uint64_t* stack = <uint64_t*> malloc((size + 1) * w * sizeof(uint64_t))
    cdef int64_t nodes = 0, total = 0, sub
    try:
        for v in range(n):
            memcpy(stack, later + v * w, w * sizeof(uint64_t))
            sub = _count_rec(later, w, stack, size - 1, &nodes, limit)
            if sub < 0:
                raise LimitExceeded(f"more than {limit} search nodes")
            total += sub
    finally:
        free(stack)
    return total


# -- greedy packing of independent r-sets ----------------------------------

cdef class _Packer:
    cdef Py_ssize_t n, w
    cdef int r
    cdef uint64_t[:, ::1] co
    cdef uint64_t[::1] alive
    cdef int64_t[::1] deg
    cdef uint64_t[:, ::1] rest
    cdef int64_t[::1] chosen
    cdef int nchosen

    def __init__(self, g, int r):
        cdef Py_ssize_t v, j
        self.n = g.n
        self.r = r
        bits = np.asarray(g.bits)
        self.w = bits.shape[1]
        co = ~bits
        tail = self.n & 63
        if tail:
            co[:, -1] &= np.uint64((1 << tail) - 1)
        idx = np.arange(self.n)
        co[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
        self.co = np.ascontiguousarray(co)
        alive = np.zeros(self.w, dtype=np.uint64)
        for v in range(self.n):
            alive[v >> 6] |= np.uint64(1) << np.uint64(v & 63)
        self.alive = alive
        self.deg = np.array([int(x) for x in np.unpackbits(co.view(np.uint8), axis=1).sum(axis=1)] if self.n else [], dtype=np.int64)
        self.rest = np.zeros((r + 1, self.w), dtype=np.uint64)
        self.chosen = np.zeros(r + 1, dtype=np.int64)
        self.nchosen = 0

    cdef void _remove(self, Py_ssize_t v) noexcept nogil:
        cdef Py_ssize_t i, u
        cdef uint64_t word
        _clear(&self.alive[0], v)
        for i in range(self.w):
            word = self.co[v, i] & self.alive[i]
            while word:
                u = (i << 6) + ctz64(word)
                word &= word - 1
                self.deg[u] -= 1

    cdef bint _extend(self, uint64_t* cand) noexcept nogil:
        # cand aliases a row of self.rest, indexed by current depth
        cdef Py_ssize_t i, u, best
        cdef int64_t best_deg
        cdef uint64_t word
        cdef int depth = self.nchosen
        cdef uint64_t* rest
        cdef uint64_t* nxt
        if self.nchosen == self.r:
            return True
        if _count(cand, self.w) < self.r - self.nchosen:
            return False
        rest = &self.rest[depth, 0]
        if rest != cand:
            memcpy(rest, cand, self.w * sizeof(uint64_t))
        while _count(rest, self.w):
            best = -1
            best_deg = self.n + 1
            for i in range(self.w):
                word = rest[i]
                while word:
                    u = (i << 6) + ctz64(word)
                    word &= word - 1
                    if self.deg[u] < best_deg:
                        best = u
                        best_deg = self.deg[u]
            _clear(rest, best)
            self.chosen[self.nchosen] = best
            self.nchosen += 1
            nxt = &self.rest[depth + 1, 0]
            for i in range(self.w):
                nxt[i] = rest[i] & self.co[best, i]
            if self._extend(nxt):
                return True
            self.nchosen -= 1
        return False

    def run(self):
        cdef Py_ssize_t i, v, pivot
        cdef int64_t pivot_deg
        cdef uint64_t word
        classes = []
        leftovers = []
        while _count(&self.alive[0], self.w):
            pivot = -1
            pivot_deg = self.n + 1
            for i in range(self.w):
                word = self.alive[i]
                while word:
                    v = (i << 6) + ctz64(word)
                    word &= word - 1
                    if self.deg[v] < pivot_deg:
                        pivot = v
                        pivot_deg = self.deg[v]
            self.chosen[0] = pivot
            self.nchosen = 1
            if self.r == 1:
                classes.append([pivot])
                self._remove(pivot)
                continue
            if pivot_deg >= self.r - 1:
                for i in range(self.w):
                    self.rest[1, i] = self.co[pivot, i] & self.alive[i]
                if self._extend(&self.rest[1, 0]):
                    members = sorted(int(self.chosen[i]) for i in range(self.r))
                    for i in range(self.r):
                        _clear(&self.alive[0], self.chosen[i])
                    for i in range(self.r):
                        self._remove_deg_only(self.chosen[i])
                    classes.append(members)
                    continue
            leftovers.append(pivot)
            self._remove(pivot)
        return classes, sorted(leftovers)

    cdef void _remove_deg_only(self, Py_ssize_t v) noexcept nogil:
        cdef Py_ssize_t i, u
        cdef uint64_t word
        for i in range(self.w):
            word = self.co[v, i] & self.alive[i]
            while word:
                u = (i << 6) + ctz64(word)
                word &= word - 1
                self.deg[u] -= 1


def independent_set_packing(g, int r):
    return _Packer(g, r).run()


# -- listing independent sets ------------------------------------------

cdef struct _IntBuf:
    int* data
    Py_ssize_t size
    Py_ssize_t cap


cdef int _push(_IntBuf* b, int x) noexcept nogil:
    cdef int* grown
    if b.size == b.cap:
        b.cap = b.cap * 2 if b.cap else 256
        grown = <int*> realloc(b.data, b.cap * sizeof(int))
        if grown == NULL:
            return -1
        b.data = grown
    b.data[b.size] = x
    b.size += 1
    return 0


cdef int _list_rec(const uint64_t* later, Py_ssize_t w, uint64_t* stack, int* chosen,
                   int depth, int size, _IntBuf* out, int64_t limit) noexcept nogil:
    # returns -1 past the limit, -2 on allocation failure
    cdef Py_ssize_t i, j, v
    cdef uint64_t word
    cdef uint64_t* nxt = stack + w
    cdef int k, rc
    if depth == size:
        if out.size >= limit * size:
            return -1
        for k in range(size):
            if _push(out, chosen[k]) < 0:
                return -2
        return 0
    if _count(stack, w) < size - depth:
        return 0
    for i in range(w):
        word = stack[i]
        while word:
            v = (i << 6) + ctz64(word)
            word &= word - 1
            chosen[depth] = <int>v
            for j in range(w):
                nxt[j] = stack[j] & later[v * w + j]
            rc = _list_rec(later, w, nxt, chosen, depth + 1, size, out, limit)
            if rc < 0:
                return rc
    return 0


def list_independent_sets(g, int size, int64_t limit):
    if size < 1:
        raise ValueError("size must be at least 1")
    cdef Py_ssize_t n = g.n
    cdef const uint64_t[:, ::1] B = g.bits
    cdef Py_ssize_t w = B.shape[1]
    cdef cnp.ndarray[uint64_t, ndim=2] later_arr = _later_masks(B, n, w)
    cdef const uint64_t* later = &later_arr[0, 0]
    cdef uint64_t* stack = <uint64_t*> malloc((size + 1) * w * sizeof(uint64_t))
    cdef int* chosen = <int*> malloc(size * sizeof(int))
    cdef _IntBuf out
    out.data = NULL
    out.size = 0
    out.cap = 0
    cdef Py_ssize_t v
    cdef int rc = 0
    try:
        for v in range(n):
            chosen[0] = <int>v
            memcpy(stack, later + v * w, w * sizeof(uint64_t))
            rc = _list_rec(later, w, stack, chosen, 1, size, &out, limit)
            if rc == -1:
                raise LimitExceeded(f"more than {limit} independent {size}-sets")
            if rc == -2:
                raise MemoryError()
        arr = np.empty((out.size // size, size), dtype=np.int32)
        if out.size:
            memcpy(cnp.PyArray_DATA(arr), out.data, out.size * sizeof(int))
        return arr
    finally:
        free(stack)
        free(chosen)
        free(out.data)


# -- iterated local search for disjoint sets -------------------------------

cdef inline uint64_t _splitmix(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef class _Search:
    cdef int n, m, r, cur
    cdef const int[:, ::1] sets
    cdef int[::1] start, members, owner
    cdef _IntBuf log, stack, one

    def __cinit__(self):
        self.log.data = self.stack.data = self.one.data = NULL
        self.log.size = self.stack.size = self.one.size = 0
        self.log.cap = self.stack.cap = self.one.cap = 0

    def __dealloc__(self):
        free(self.log.data)
        free(self.stack.data)
        free(self.one.data)

    def __init__(self, int n, sets):
        cdef int i, k, v
        self.n = n
        self.sets = sets
        self.m = self.sets.shape[0]
        self.r = self.sets.shape[1]
        counts = np.zeros(n + 1, dtype=np.int32)
        cdef int[::1] c = counts
        for i in range(self.m):
            for k in range(self.r):
                c[self.sets[i, k] + 1] += 1
        self.start = np.cumsum(counts).astype(np.int32)
        self.members = np.empty(self.m * self.r, dtype=np.int32)
        fill = np.asarray(self.start[:n]).copy()
        cdef int[::1] f = fill
        for i in range(self.m):
            for k in range(self.r):
                v = self.sets[i, k]
                self.members[f[v]] = i
                f[v] += 1
        self.owner = np.full(n, -1, dtype=np.int32)
        self.cur = 0

    cdef inline void add(self, int i) noexcept nogil:
        cdef int k
        for k in range(self.r):
            self.owner[self.sets[i, k]] = i
        self.cur += 1
        _push(&self.log, i + 1)

    cdef inline void rem(self, int i) noexcept nogil:
        cdef int k
        for k in range(self.r):
            self.owner[self.sets[i, k]] = -1
        self.cur -= 1
        _push(&self.log, -(i + 1))

    cdef inline bint chosen(self, int i) noexcept nogil:
        return self.owner[self.sets[i, 0]] == i

    cdef inline bint unblocked(self, int i) noexcept nogil:
        cdef int k
        for k in range(self.r):
            if self.owner[self.sets[i, k]] != -1:
                return False
        return True

    cdef inline bint only_by(self, int j, int x) noexcept nogil:
        cdef int k, o
        cdef bint hit = False
        for k in range(self.r):
            o = self.owner[self.sets[j, k]]
            if o == x:
                hit = True
            elif o != -1:
                return False
        return hit

    cdef inline bint disjoint(self, int a, int b) noexcept nogil:
        cdef int k, l
        for k in range(self.r):
            for l in range(self.r):
                if self.sets[a, k] == self.sets[b, l]:
                    return False
        return True

    cdef void refill_around(self, int x) noexcept nogil:
        cdef int k, v, t, j
        for k in range(self.r):
            v = self.sets[x, k]
            for t in range(self.start[v], self.start[v + 1]):
                j = self.members[t]
                if j != x and self.unblocked(j):
                    self.add(j)

    cdef void push_chosen_around(self, int x) noexcept nogil:
        cdef int k, v, t, j
        for k in range(self.r):
            v = self.sets[x, k]
            for t in range(self.start[v], self.start[v + 1]):
                j = self.members[t]
                if j != x and self.chosen(j):
                    _push(&self.stack, j)

    cdef void local(self) noexcept nogil:
        cdef int x, k, v, t, j, a, b, pa, pb
        while self.stack.size:
            self.stack.size -= 1
            x = self.stack.data[self.stack.size]
            if not self.chosen(x):
                continue
            self.one.size = 0
            for k in range(self.r):
                v = self.sets[x, k]
                for t in range(self.start[v], self.start[v + 1]):
                    j = self.members[t]
                    if j != x and self.only_by(j, x):
                        _push(&self.one, j)
            pa = -1
            for a in range(self.one.size):
                for b in range(a + 1, self.one.size):
                    if self.disjoint(self.one.data[a], self.one.data[b]):
                        pa = self.one.data[a]
                        pb = self.one.data[b]
                        break
                if pa >= 0:
                    break
            if pa < 0:
                continue
            self.rem(x)
            self.add(pa)
            self.add(pb)
            self.refill_around(x)
            self.push_chosen_around(x)

    cdef list solution(self):
        cdef int v
        return sorted({self.owner[v] for v in range(self.n) if self.owner[v] != -1})

    def run(self, initial, int64_t iters, uint64_t seed):
        cdef int i, k, v, o, prev, best, op, nrem, cap
        cdef int64_t it
        cdef Py_ssize_t z
        cdef uint64_t state = seed
        cdef int removed[64]
        for i in initial:
            self.add(i)
        for i in range(self.m):
            if self.unblocked(i):
                self.add(i)
        for i in range(self.m):
            if self.chosen(i):
                _push(&self.stack, i)
        self.local()
        best = self.cur
        best_sol = self.solution()
        cap = min(self.m, self.n // self.r)
        for it in range(iters):
            if best == cap:
                break
            self.log.size = 0
            prev = self.cur
            while True:
                k = <int>(_splitmix(&state) % <uint64_t>self.m)
                if not self.chosen(k):
                    break
            nrem = 0
            for i in range(self.r):
                o = self.owner[self.sets[k, i]]
                if o != -1:
                    for v in range(nrem):
                        if removed[v] == o:
                            break
                    else:
                        removed[nrem] = o
                        nrem += 1
            for i in range(nrem):
                self.rem(removed[i])
            self.add(k)
            for i in range(nrem):
                self.refill_around(removed[i])
            self.stack.size = 0
            _push(&self.stack, k)
            for i in range(nrem):
                self.push_chosen_around(removed[i])
            self.local()
            if self.cur >= prev:
                if self.cur > best:
                    best = self.cur
                    best_sol = self.solution()
            else:
                for z in range(self.log.size - 1, -1, -1):
                    op = self.log.data[z]
                    if op > 0:
                        for i in range(self.r):
                            self.owner[self.sets[op - 1, i]] = -1
                        self.cur -= 1
                    else:
                        for i in range(self.r):
                            self.owner[self.sets[-op - 1, i]] = -op - 1
                        self.cur += 1
        return best_sol


def improve_packing(int n, sets, initial, int64_t iters, uint64_t seed):
    arr = np.ascontiguousarray(sets, dtype=np.int32)
    if arr.ndim != 2 or arr.shape[0] == 0:
        return sorted(int(i) for i in initial)
    if arr.shape[1] > 64:
        raise ValueError("set size above 64 is not supported")
    return _Search(n, arr).run([int(i) for i in initial], iters, seed)
