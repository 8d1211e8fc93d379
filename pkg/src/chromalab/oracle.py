"""Exact solvers for small graphs, used as ground truth.

Each solver refuses inputs beyond its :class:`OracleBudget` by raising
:class:`BudgetExceeded`, so sweeps can record "oracle unavailable" instead
of a degraded answer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .graph import Graph

__all__ = [
    "BudgetExceeded",
    "OracleBudget",
    "exact_chromatic",
    "exact_coloring",
    "is_k_colorable",
    "clique_number",
    "exact_max_independent_set",
    "brute_matching",
    "enumerate_small_component_graphs",
]


class BudgetExceeded(RuntimeError):
    """The instance is larger, or slower, than the oracle budget allows."""


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 60
    subset_max_vertices: int = 20
    matching_max_vertices: int = 16
    time_limit: float | None = None  # seconds

    def check(self, n: int, cap: int | None = None) -> None:
        cap = self.max_vertices if cap is None else cap
        if n > cap:
            raise BudgetExceeded(f"n={n} exceeds the oracle budget of {cap} vertices")

    def deadline(self) -> float | None:
        return None if self.time_limit is None else time.monotonic() + self.time_limit


DEFAULT_BUDGET = OracleBudget()


class _Clock:
    __slots__ = ("deadline", "ticks")

    def __init__(self, deadline):
        self.deadline = deadline
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and not self.ticks & 1023:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded("oracle time limit exceeded")


def _max_clique(rows: list[int], n: int, clock: _Clock) -> int:
    """Maximum clique size by branch and bound with a greedy colouring bound."""
    best = 0

    def colour_bound(cand: int) -> list[tuple[int, int]]:
        # vertices of cand with their greedy colour number, ascending colour
        out = []
        colour = 0
        rest = cand
        while rest:
            colour += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                out.append((v, colour))
                rest &= ~low
                avail &= ~(low | rows[v])
        return out

    def expand(size: int, cand: int):
        nonlocal best
        clock.tick()
        ordered = colour_bound(cand)
        for v, colour in reversed(ordered):
            if size + colour <= best:
                return
            sub = cand & rows[v]
            if sub:
                expand(size + 1, sub)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    if n:
        expand(0, (1 << n) - 1)
    return best


def clique_number(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    budget.check(g.n)
    return _max_clique(g.rows, g.n, _Clock(budget.deadline()))


def exact_max_independent_set(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Independence number, as the clique number of the complement."""
    budget.check(g.n)
    full = (1 << g.n) - 1
    co = [(~row) & full & ~(1 << v) for v, row in enumerate(g.rows)]
    return _max_clique(co, g.n, _Clock(budget.deadline()))


def _vertex_order(g: Graph) -> list[int]:
    rows = g.rows
    return sorted(range(g.n), key=lambda v: (-rows[v].bit_count(), v))


def exact_coloring(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> list[int]:
    """An optimal colouring as a list of colours indexed by vertex.

    Branch and bound over vertices in decreasing-degree order with colours
    tried in ascending order; the search stops once it meets the clique
    lower bound.
    """
    budget.check(g.n)
    n = g.n
    if n == 0:
        return []
    clock = _Clock(budget.deadline())
    rows = g.rows
    lower = _max_clique(rows, n, clock)
    order = _vertex_order(g)

    # first-fit on the same order gives the starting upper bound
    classes: list[int] = []
    best_colors = [0] * n
    for v in order:
        for c, members in enumerate(classes):
            if not rows[v] & members:
                classes[c] |= 1 << v
                best_colors[v] = c
                break
        else:
            best_colors[v] = len(classes)
            classes.append(1 << v)
    best = len(classes)
    if best == lower:
        return best_colors

    colors = [0] * n
    masks: list[int] = []

    def rec(idx: int) -> bool:
        nonlocal best, best_colors
        clock.tick()
        used = len(masks)
        if used >= best:
            return False
        if idx == n:
            best = used
            best_colors = colors[:]
            return best == lower
        v = order[idx]
        bit = 1 << v
        for c in range(used):
            if not rows[v] & masks[c]:
                masks[c] |= bit
                colors[v] = c
                if rec(idx + 1):
                    return True
                masks[c] ^= bit
        if used + 1 < best:
            masks.append(bit)
            colors[v] = used
            if rec(idx + 1):
                return True
            masks.pop()
        return False

    rec(0)
    return best_colors


def exact_chromatic(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    colors = exact_coloring(g, budget)
    return max(colors) + 1 if colors else 0


def is_k_colorable(g: Graph, k: int, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Plain backtracking k-colourability test (vertex 0 gets colour 0)."""
    budget.check(g.n)
    n = g.n
    if n == 0:
        return True
    if k <= 0:
        return False
    rows = g.rows
    clock = _Clock(budget.deadline())
    masks = [0] * k

    def rec(v: int, used: int) -> bool:
        clock.tick()
        if v == n:
            return True
        for c in range(min(used + 1, k)):
            if not rows[v] & masks[c]:
                masks[c] |= 1 << v
                if rec(v + 1, max(used, c + 1)):
                    return True
                masks[c] ^= 1 << v
        return False

    return rec(0, 0)


def brute_matching(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Maximum matching by exhaustive recursion over the lowest free vertex."""
    budget.check(g.n, budget.matching_max_vertices)
    rows = g.rows

    @lru_cache(maxsize=None)
    def best(free: int) -> int:
        if not free:
            return 0
        low = free & -free
        v = low.bit_length() - 1
        rest = free ^ low
        top = best(rest)
        nb = rows[v] & rest
        while nb:
            b = nb & -nb
            top = max(top, 1 + best(rest ^ b))
            nb ^= b
        return top

    return best((1 << g.n) - 1)


def enumerate_small_component_graphs(Y: int, q: float, exact: bool = False) -> dict:
    """Distribution of the isolated-edge count over graphs on ``Y`` labelled
    vertices whose components all have at most two vertices.

    Every such graph is a matching; each is weighted by
    ``q^e (1-q)^(C(Y,2)-e)`` and the weights are normalised.  Arithmetic is
    exact over the rationals; ``exact=True`` returns :class:`Fraction`
    values, otherwise floats.
    """
    if not 0 <= Y <= 10:
        raise ValueError(f"Y={Y} is outside the enumerable range 0..10")
    qf = Fraction(q)
    if not 0 < qf < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    pairs = math.comb(Y, 2)
    counts: dict[int, int] = {}

    def walk(free: tuple[int, ...], edges: int):
        if len(free) < 2:
            counts[edges] = counts.get(edges, 0) + 1
            return
        rest = free[1:]
        walk(rest, edges)
        for j in range(len(rest)):
            walk(rest[:j] + rest[j + 1:], edges + 1)

    walk(tuple(range(Y)), 0)
    weights = {m: c * qf**m * (1 - qf) ** (pairs - m) for m, c in counts.items()}
    total = sum(weights.values())
    dist = {m: w / total for m, w in sorted(weights.items())}
    return dist if exact else {m: float(w) for m, w in dist.items()}
