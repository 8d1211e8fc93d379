"""Very dense G(n, p): matchings in the complement and small-set counts.

For ``q = 1 - p`` tiny, ``chi(G)`` is pinned between ``n - M - Y`` and
``n - M``, where ``M`` is the maximum matching of the complement and
``Y = sum_{i >= 3} i X_i`` weights the independent-set counts ``X_i``.
The closed forms here (``mu``, ``lambda_0``, ``lambda_1``, the isolated-edge
ratio) are evaluated in log space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from . import kernels
from .graph import Graph, VertexSet, complement, induced_subgraph

__all__ = [
    "CountInfeasible",
    "DenseStats",
    "Sandwich",
    "max_matching",
    "matching_pairs",
    "count_independent_sets",
    "independent_set_counts",
    "chi_sandwich",
    "mu_formula",
    "component_split",
    "phi_ratio",
    "find_m0",
    "lambda_forms",
    "dense_stats",
]

DEFAULT_COUNT_LIMIT = 50_000_000


class CountInfeasible(ValueError):
    """Exact independent-set counting would exceed the work budget."""


def matching_pairs(g: Graph) -> list[tuple[int, int]]:
    mate = kernels.max_matching(g)
    return [(v, w) for v, w in enumerate(mate) if v < w]


def max_matching(g: Graph) -> int:
    """Size (in edges) of a maximum matching, via blossom contraction."""
    return sum(1 for w in kernels.max_matching(g) if w != -1) // 2


def count_independent_sets(
    g: Graph, i: int, *, method: str = "auto", limit: int = DEFAULT_COUNT_LIMIT
) -> int:
    """Exact number ``X_i`` of independent ``i``-sets of ``g``.

    ``method="enumerate"`` searches cliques of the complement in increasing
    vertex order, intersecting candidate sets as bitsets; cost tracks the
    number of small independent sets, so it suits dense ``g``.
    ``method="exhaustive"`` tests every ``i``-subset and is only for small
    ``n``.  ``"auto"`` is ``"enumerate"``.  Raises :class:`CountInfeasible`
    instead of approximating when the budget runs out.
    """
    if i < 1:
        raise ValueError(f"i must be at least 1, got {i}")
    if i > g.n:
        return 0
    if method == "exhaustive":
        if math.comb(g.n, i) > limit:
            raise CountInfeasible(f"C({g.n}, {i}) subsets exceed the limit of {limit}")
        rows = g.rows
        total = 0
        for subset in itertools.combinations(range(g.n), i):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if all(not rows[v] & mask for v in subset):
                total += 1
        return total
    if method not in ("auto", "enumerate"):
        raise ValueError(f"unknown counting method {method!r}")
    try:
        return kernels.count_independent_sets(g, i, limit)
    except kernels.LIMIT_ERRORS as exc:
        raise CountInfeasible(f"counting X_{i}: {exc}") from None


def independent_set_counts(
    g: Graph, start: int, i_max: int, *, limit: int = DEFAULT_COUNT_LIMIT
) -> tuple[dict[int, int], bool]:
    """Counts ``X_i`` for ``start <= i <= i_max``.

    Stops at the first zero count, since no larger independent set can then
    exist.  The flag is true when such a zero was reached, i.e. when the
    truncated sum over ``i`` is exact.
    """
    counts: dict[int, int] = {}
    for i in range(start, i_max + 1):
        counts[i] = count_independent_sets(g, i, limit=limit)
        if counts[i] == 0:
            return counts, True
    return counts, i_max >= g.n


class Sandwich(NamedTuple):
    lower: int
    upper: int
    raw_lower: int
    clamped: bool
    Y: int
    y_exact: bool
    M: int


def chi_sandwich(g: Graph, i_max: int) -> Sandwich:
    """Bounds ``n - M - Y <= chi(g) <= n - M``.

    ``M`` is the maximum matching of the complement and ``Y`` sums
    ``i * X_i`` for ``3 <= i <= i_max``.  ``y_exact`` certifies that every
    larger count is zero.  A nonpositive lower bound is raised to 1 (for
    ``n >= 1``) and flagged as ``clamped``.
    """
    if i_max < 3:
        raise ValueError(f"i_max must be at least 3, got {i_max}")
    n = g.n
    M = max_matching(complement(g))
    counts, exact = independent_set_counts(g, 3, i_max)
    Y = sum(i * x for i, x in counts.items())
    upper = n - M
    raw = upper - Y
    clamped = n >= 1 and raw < 1
    return Sandwich(1 if clamped else raw, upper, raw, clamped, Y, exact, M)


def mu_formula(n: int, p: float, r: int) -> float:
    """Expected number of independent ``(r+1)``-sets, ``C(n, r+1) (1-p)^C(r+1, 2)``."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    s = r + 1
    if s > n or p == 1.0:
        return 0.0
    log_comb = math.log(math.comb(n, s))
    return math.exp(log_comb + math.comb(s, 2) * math.log1p(-p))


def _power(log_base: float, base: float, e: int) -> float:
    if e == 0:
        return 1.0
    if base == 0.0:
        return 0.0
    return math.exp(e * log_base)


def lambda_forms(n: int, q: float) -> tuple[float, float]:
    """Expected isolated vertices and isolated edges of ``G(n, q)``:
    ``n (1-q)^(n-1)`` and ``C(n, 2) q (1-q)^(2n-4)``."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    keep = 1.0 - q
    log_keep = math.log1p(-q) if q < 1.0 else -math.inf
    lam0 = n * _power(log_keep, keep, n - 1) if n >= 1 else 0.0
    lam1 = math.comb(n, 2) * q * _power(log_keep, keep, 2 * n - 4) if n >= 2 else 0.0
    return lam0, lam1


def component_split(g: Graph) -> tuple[VertexSet, VertexSet, int]:
    """Split vertices into components of size >= 3 and the rest.

    Returns ``(big, small, X1)`` with ``X1`` the number of isolated edges
    (components of exactly two vertices).
    """
    rows = g.rows
    unseen = (1 << g.n) - 1
    big: list[int] = []
    small: list[int] = []
    isolated_edges = 0
    while unseen:
        low = unseen & -unseen
        comp = frontier = low
        while frontier:
            reach = 0
            f = frontier
            while f:
                b = f & -f
                reach |= rows[b.bit_length() - 1]
                f ^= b
            frontier = reach & ~comp
            comp |= frontier
        unseen &= ~comp
        size = comp.bit_count()
        members = []
        while comp:
            b = comp & -comp
            members.append(b.bit_length() - 1)
            comp ^= b
        if size >= 3:
            big.extend(members)
        else:
            small.extend(members)
            isolated_edges += size == 2
    return tuple(sorted(big)), tuple(sorted(small)), isolated_edges


def _phi(Y: float, q: float, m: float) -> float:
    rest = Y - 2.0 * m
    return (1.0 - q) * (m + 1.0) / (q * rest * (rest - 1.0) / 2.0)


def phi_ratio(Y: int, q: float, m: int) -> float:
    """``P(X1 = m) / P(X1 = m + 1)`` for the small-component part on ``Y``
    vertices: ``(1-q)(m+1) / (q C(Y-2m, 2))``."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if m < 0 or 2 * (m + 1) > Y:
        raise ValueError(f"m={m} outside 0 <= m <= Y/2 - 1 for Y={Y}")
    return (1.0 - q) * (m + 1) / (q * math.comb(Y - 2 * m, 2))


def find_m0(Y: int, q: float, rel_tol: float = 1e-9) -> float:
    """Real root of ``Phi(m) = 1`` on ``(0, Y/2 - 1)`` by bisection.

    ``Phi`` is strictly increasing there, so the root is unique.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    hi = Y / 2.0 - 1.0
    if hi <= 0.0:
        raise ValueError(f"Y={Y} leaves no room for a root")
    if not _phi(Y, q, 0.0) < 1.0:
        raise ValueError(f"Phi(0)={_phi(Y, q, 0.0)} is not below 1")
    if not _phi(Y, q, hi) > 1.0:
        raise ValueError(f"Phi(Y/2-1)={_phi(Y, q, hi)} is not above 1")
    lo = 0.0
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if _phi(Y, q, mid) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DenseStats:
    """Matching and small-structure statistics of one graph.

    ``M`` is the maximum matching of the complement.  ``X1_isolated``,
    ``X2_bigmatch`` and ``Y_components`` refer to the complement's
    decomposition into components of size >= 3 (matched ``X2``) and
    components of size <= 2 (``Y_components`` vertices, ``X1`` of them
    isolated edges).  ``X`` and ``Y_small`` count independent sets of the
    graph itself.
    """

    M: int
    X: dict[int, int] = field(default_factory=dict)
    Y_small: int = 0
    Y_components: int = 0
    X1_isolated: int = 0
    X2_bigmatch: int = 0
    y_exact: bool = False


def dense_stats(g: Graph, i_max: int = 6) -> DenseStats:
    comp = complement(g)
    M = max_matching(comp)
    big, small, x1 = component_split(comp)
    x2 = max_matching(induced_subgraph(comp, big)) if big else 0
    counts = {1: g.n, 2: comp.edge_count}
    extra, exact = independent_set_counts(g, 3, i_max) if i_max >= 3 else ({}, False)
    counts.update(extra)
    y_small = sum(i * x for i, x in extra.items())
    return DenseStats(M, counts, y_small, len(small), x1, x2, exact)
