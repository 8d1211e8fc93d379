"""Pure-Python kernels on Python-integer bitsets.

Reference implementation of every routine in ``_ckernels.pyx``; the two
must agree exactly, including tie-breaking.  Vertex sets arrive as ascending
sequences of ints.
"""

from __future__ import annotations

import heapq
from collections import deque

BACKEND = "python"
BUILD_ID = "python"


class LimitExceeded(RuntimeError):
    """Enumeration work exceeded the caller's node limit."""


def _mask(members) -> int:
    out = 0
    for v in members:
        out |= 1 << v
    return out


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def min_degree_vertex(g, members) -> tuple[int, int]:
    rows = g.rows
    mask = _mask(members)
    best, best_deg = -1, g.n + 1
    for v in members:
        d = (rows[v] & mask).bit_count()
        if d < best_deg:
            best, best_deg = v, d
    return best, best_deg


def greedy_independent_set(g, members) -> list[int]:
    """Repeatedly take a min-degree survivor and drop its closed neighbourhood."""
    rows = g.rows
    alive = _mask(members)
    picked = []
    while alive:
        best, best_deg = -1, g.n + 1
        for v in _iter_bits(alive):
            d = (rows[v] & alive).bit_count()
            if d < best_deg:
                best, best_deg = v, d
                if d == 0:
                    break
        picked.append(best)
        alive &= ~(rows[best] | (1 << best))
    return picked


def degeneracy_order(g, members) -> tuple[list[int], list[int]]:
    """Min-degree peeling order and the degree of each vertex at removal."""
    rows = g.rows
    alive = _mask(members)
    deg = {v: (rows[v] & alive).bit_count() for v in members}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    order, removal = [], []
    while heap:
        d, v = heapq.heappop(heap)
        if not (alive >> v) & 1 or deg[v] != d:
            continue
        order.append(v)
        removal.append(d)
        alive &= ~(1 << v)
        for u in _iter_bits(rows[v] & alive):
            deg[u] -= 1
            heapq.heappush(heap, (deg[u], u))
    return order, removal


def color_in_order(g, order) -> list[int]:
    """First-fit colours for ``order``; entry ``i`` is the colour of ``order[i]``."""
    rows = g.rows
    classes: list[int] = []
    out = []
    for v in order:
        nb = rows[v]
        for c, members in enumerate(classes):
            if not nb & members:
                classes[c] = members | (1 << v)
                break
        else:
            c = len(classes)
            classes.append(1 << v)
        out.append(c)
    return out


def max_matching(g) -> list[int]:
    """Maximum-cardinality matching by Edmonds' blossom contraction.

    Returns the ``mate`` array (``-1`` for exposed vertices).
    """
    n = g.n
    indptr, indices = g.csr()
    indptr = indptr.tolist()
    indices = indices.tolist()
    adj = [indices[indptr[v]:indptr[v + 1]] for v in range(n)]
    mate = [-1] * n
    for v in range(n):
        if mate[v] == -1:
            for u in adj[v]:
                if mate[u] == -1:
                    mate[v] = u
                    mate[u] = v
                    break

    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    touched: list[int] = []

    def lca(a, b):
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            b = parent[mate[b]]

    def mark_path(v, b, child, blossom):
        while base[v] != b:
            blossom.add(base[v])
            blossom.add(base[mate[v]])
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_path(root):
        for v in touched:
            parent[v] = -1
            base[v] = v
            used[v] = False
        touched.clear()
        used[root] = True
        touched.append(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    blossom: set[int] = set()
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in list(touched):
                        if base[i] in blossom:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    touched.append(to)
                    if mate[to] == -1:
                        return to
                    nxt = mate[to]
                    if not used[nxt]:
                        used[nxt] = True
                        touched.append(nxt)
                    queue.append(nxt)
        return -1

    for root in range(n):
        if mate[root] != -1 or not adj[root]:
            continue
        v = find_path(root)
        while v != -1:
            pv = parent[v]
            nxt = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = nxt
    return mate


def count_independent_sets(g, size: int, limit: int) -> int:
    """Number of independent ``size``-sets, by ordered clique search in the complement."""
    n = g.n
    if size <= 0:
        return 1
    if size == 1:
        return n
    full = (1 << n) - 1
    rows = g.rows
    later = [(~rows[v]) & full & ~((2 << v) - 1) for v in range(n)]
    nodes = 0

    def rec(cand, need):
        nonlocal nodes
        if need == 1:
            return cand.bit_count()
        if cand.bit_count() < need:
            return 0
        total = 0
        for v in _iter_bits(cand):
            nodes += 1
            if nodes > limit:
                raise LimitExceeded(f"more than {limit} search nodes")
            total += rec(cand & later[v], need - 1)
        return total

    return sum(rec(later[v], size - 1) for v in range(n))


def independent_set_packing(g, r: int) -> tuple[list[list[int]], list[int]]:
    """Greedy vertex-disjoint independent ``r``-sets.

    Pivot: the available vertex with fewest available non-neighbours
    (smallest index on ties).  Partners are tried in the same order by
    depth-first search; a pivot with no completing ``r``-set is set aside as
    a leftover, which is final because the available set only shrinks.
    """
    n = g.n
    full = (1 << n) - 1
    co = [(~row) & full & ~(1 << v) for v, row in enumerate(g.rows)]
    alive = full
    deg = [c.bit_count() for c in co]
    classes: list[list[int]] = []
    leftovers: list[int] = []

    def remove(vs):
        nonlocal alive
        for v in vs:
            alive &= ~(1 << v)
        for v in vs:
            for u in _iter_bits(co[v] & alive):
                deg[u] -= 1

    def extend(chosen, cand):
        if len(chosen) == r:
            return True
        if cand.bit_count() < r - len(chosen):
            return False
        rest = cand
        while rest:
            best, best_deg = -1, n + 1
            for u in _iter_bits(rest):
                if deg[u] < best_deg:
                    best, best_deg = u, deg[u]
            rest &= ~(1 << best)
            chosen.append(best)
            if extend(chosen, cand & co[best] & rest):
                return True
            chosen.pop()
        return False

    while alive:
        pivot, pivot_deg = -1, n + 1
        for v in _iter_bits(alive):
            if deg[v] < pivot_deg:
                pivot, pivot_deg = v, deg[v]
        chosen = [pivot]
        if r > 1 and pivot_deg >= r - 1 and extend(chosen, co[pivot] & alive):
            classes.append(sorted(chosen))
            remove(chosen)
        elif r == 1:
            classes.append([pivot])
            remove([pivot])
        else:
            leftovers.append(pivot)
            remove([pivot])
    return classes, sorted(leftovers)


def list_independent_sets(g, size: int, limit: int):
    """All independent ``size``-sets as an ``(m, size)`` int32 array, rows in
    lexicographic order.  Raises :class:`LimitExceeded` past ``limit`` sets."""
    import numpy as np

    n = g.n
    if size < 1:
        raise ValueError("size must be at least 1")
    full = (1 << n) - 1
    rows = g.rows
    later = [(~rows[v]) & full & ~((2 << v) - 1) for v in range(n)]
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(cand):
        if len(chosen) == size:
            if len(out) >= limit:
                raise LimitExceeded(f"more than {limit} independent {size}-sets")
            out.append(tuple(chosen))
            return
        if cand.bit_count() < size - len(chosen):
            return
        for v in _iter_bits(cand):
            chosen.append(v)
            rec(cand & later[v])
            chosen.pop()

    for v in range(n):
        chosen.append(v)
        rec(later[v])
        chosen.pop()
    return np.array(out, dtype=np.int32).reshape(len(out), size)


_MASK64 = (1 << 64) - 1


def _splitmix(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def improve_packing(n: int, sets, initial, iters: int, seed: int) -> list[int]:
    """Iterated local search for many pairwise disjoint rows of ``sets``.

    ``initial`` indexes a disjoint starting family.  Each round forces a
    random unused set in, drops the chosen sets it meets, refills greedily and
    applies (1,2)-swaps (one chosen set out, two disjoint sets in); the round
    is kept unless the family shrank.  Stops early once the family cannot
    grow.  Returns the indices of the largest family seen, ascending.
    """
    sets = [tuple(int(v) for v in row) for row in sets]
    m = len(sets)
    by_v: list[list[int]] = [[] for _ in range(n)]
    for i, s in enumerate(sets):
        for v in s:
            by_v[v].append(i)
    owner = [-1] * n
    log: list[int] = []  # i + 1 for an insertion, -(i + 1) for a removal
    cur = 0

    def add(i):
        nonlocal cur
        for v in sets[i]:
            owner[v] = i
        cur += 1
        log.append(i + 1)

    def rem(i):
        nonlocal cur
        for v in sets[i]:
            owner[v] = -1
        cur -= 1
        log.append(-(i + 1))

    def chosen(i):
        return owner[sets[i][0]] == i

    def unblocked(i):
        return all(owner[v] == -1 for v in sets[i])

    def only_by(j, x):
        hit = False
        for v in sets[j]:
            o = owner[v]
            if o == x:
                hit = True
            elif o != -1:
                return False
        return hit

    def disjoint(a, b):
        sb = sets[b]
        return not any(v in sb for v in sets[a])

    def neighbours(x):
        for v in sets[x]:
            for j in by_v[v]:
                if j != x:
                    yield j

    def local(stack):
        while stack:
            x = stack.pop()
            if not chosen(x):
                continue
            one = [j for j in neighbours(x) if only_by(j, x)]
            pair = None
            for a in range(len(one)):
                for b in range(a + 1, len(one)):
                    if disjoint(one[a], one[b]):
                        pair = (one[a], one[b])
                        break
                if pair:
                    break
            if pair is None:
                continue
            rem(x)
            add(pair[0])
            add(pair[1])
            for j in neighbours(x):
                if unblocked(j):
                    add(j)
            for j in neighbours(x):
                if chosen(j):
                    stack.append(j)

    for i in initial:
        add(int(i))
    for i in range(m):
        if unblocked(i):
            add(i)
    local([i for i in range(m) if chosen(i)])
    best = cur
    best_sol = sorted({o for o in owner if o != -1})
    state = seed & _MASK64
    cap = min(m, n // len(sets[0])) if m else 0  # no family can be larger
    for _ in range(iters):
        if best == cap:
            break
        log.clear()
        prev = cur
        while True:
            state, draw = _splitmix(state)
            k = draw % m
            if not chosen(k):
                break
        removed = []
        for v in sets[k]:
            o = owner[v]
            if o != -1 and o not in removed:
                removed.append(o)
        for j in removed:
            rem(j)
        add(k)
        for j in removed:
            for t in neighbours(j):
                if unblocked(t):
                    add(t)
        stack = [k]
        for j in removed:
            for t in neighbours(j):
                if chosen(t):
                    stack.append(t)
        local(stack)
        if cur >= prev:
            if cur > best:
                best = cur
                best_sol = sorted({o for o in owner if o != -1})
        else:
            for op in reversed(log):
                i = abs(op) - 1
                if op > 0:
                    for v in sets[i]:
                        owner[v] = -1
                    cur -= 1
                else:
                    for v in sets[i]:
                        owner[v] = i
                    cur += 1
    return best_sol
