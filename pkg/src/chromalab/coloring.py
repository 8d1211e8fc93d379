"""Greedy colourings of G(n, p) and the parameters that drive them.

All procedures are deterministic functions of the graph: the greedy steps
break ties by smallest vertex index.  A procedure that works on a vertex
subset ``Z`` colours ``g[Z]`` and returns colours keyed by the original
vertex labels.  Every phase of a procedure takes fresh, consecutive colour
indices; no colour is shared between phases.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .graph import Graph, VertexSet, vertex_set

__all__ = [
    "Coloring",
    "Regime",
    "RegimeError",
    "RegimeParams",
    "greedy_independent_set",
    "lemma3_size_bound",
    "degeneracy_coloring",
    "greedy_sequential_coloring",
    "two_phase_color_sparse",
    "direct_degeneracy_color",
    "two_phase_color_dense",
    "clique_partition_color",
    "color_by_regime",
    "check_event_D",
    "check_event_E",
    "core_numbers",
    "EXHAUSTIVE_LIMIT",
]

EXHAUSTIVE_LIMIT = 20
PACKING_SET_LIMIT = 500_000


class RegimeError(ValueError):
    """A procedure was called with parameters of the wrong regime."""


class Regime(str, enum.Enum):
    SPARSE_LARGE_ZP = "SPARSE_LARGE_ZP"
    SPARSE_SMALL_ZP = "SPARSE_SMALL_ZP"
    DENSE = "DENSE"


@dataclass(frozen=True)
class Coloring:
    """A vertex colouring with colours ``0..num_colors-1``.

    ``phases`` holds the number of colours each phase of the producing
    procedure consumed, in palette order; ``info`` carries
    procedure-specific diagnostics.
    """

    assignment: dict[int, int]
    num_colors: int
    phases: tuple[int, ...] = ()
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        used = set(self.assignment.values())
        if used != set(range(self.num_colors)):
            raise ValueError("colours must be exactly 0..num_colors-1")

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v in sorted(self.assignment):
            out[self.assignment[v]].append(v)
        return out

    def violations(self, g: Graph) -> list[tuple[int, int]]:
        """Monochromatic edges of ``g`` among the coloured vertices."""
        masks: dict[int, int] = {}
        for v, c in self.assignment.items():
            masks[c] = masks.get(c, 0) | (1 << v)
        rows = g.rows
        bad = []
        for v in sorted(self.assignment):
            clash = rows[v] & masks[self.assignment[v]] & ~((2 << v) - 1)
            while clash:
                low = clash & -clash
                bad.append((v, low.bit_length() - 1))
                clash ^= low
        return bad

    def is_proper(self, g: Graph) -> bool:
        return not self.violations(g)

    def to_csv(self) -> str:
        lines = ["vertex,color"]
        lines.extend(f"{v},{self.assignment[v]}" for v in sorted(self.assignment))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RegimeParams:
    """Derived parameters of one ``(n, p, omega)`` configuration.

    Fields that a regime does not use are ``None``.  ``dense_A`` stands in
    for the unspecified constant relating ``k`` to ``log n / log(1/q)``.
    """

    n: int
    p: float
    omega: float
    gamma: float
    z: float
    eps: float
    regime_tag: Regime
    d: float | None = None
    u: float | None = None
    r: int | None = None
    m: float | None = None
    k: int | None = None
    q: float | None = None
    dense_A: float | None = None

    @classmethod
    def derive(
        cls,
        n: int,
        p: float,
        omega: float,
        gamma: float = 0.5,
        *,
        regime: Regime | str | None = None,
        dense_A: float = 3.0,
    ) -> "RegimeParams":
        """Classify ``(n, p, omega)`` and compute the regime's parameters.

        Without an explicit ``regime``: ``p > gamma`` is DENSE; otherwise
        the sparse case is split on whether ``z*p`` exceeds ``log n``.
        """
        if n < 2:
            raise ValueError("n must be at least 2")
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        if not omega > 1.0:
            raise ValueError(f"omega must exceed 1, got {omega}")
        if not 0.0 < gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
        z = omega * math.sqrt(n)
        eps = (1.0 - gamma) / (1.0 + gamma)
        log_n = math.log(n)
        if regime is None:
            if p > gamma:
                regime = Regime.DENSE
            elif z * p > log_n:
                regime = Regime.SPARSE_LARGE_ZP
            else:
                regime = Regime.SPARSE_SMALL_ZP
        regime = Regime(regime)
        base = dict(n=n, p=p, omega=omega, gamma=gamma, z=z, eps=eps, regime_tag=regime)

        if regime is Regime.SPARSE_LARGE_ZP:
            d = (1.0 + eps) * p
            u = 24.0 * log_n / (eps * eps * p)
            if not 0.0 < d < 1.0 < u:
                raise RegimeError(f"need 0 < d < 1 < u, got d={d}, u={u}")
            r = math.ceil(2.0 * math.e**2 * u * p)
            return cls(**base, d=d, u=u, r=r)
        if regime is Regime.SPARSE_SMALL_ZP:
            zp = z * p
            if not zp < log_n:
                raise RegimeError(f"z*p={zp} must be below log n={log_n}")
            r = math.ceil(4.0 * log_n / math.log(log_n / zp))
            return cls(**base, r=r)
        q = 1.0 - p
        d = 1.0 - q / 2.0
        u = 96.0 * log_n / q
        m = n ** (1.0 / 3.0)
        k = max(2, math.ceil(log_n / (dense_A * math.log(1.0 / q))))
        return cls(**base, d=d, u=u, m=m, k=k, q=q, dense_A=dense_A)

    def require(self, regime: Regime) -> None:
        if self.regime_tag is not regime:
            raise RegimeError(f"expected {regime.value} parameters, got {self.regime_tag.value}")


# -- building blocks -------------------------------------------------------

def greedy_independent_set(g: Graph, w: Iterable[int]) -> VertexSet:
    """Independent subset of ``w``: keep taking a minimum-degree survivor of
    ``g[W]`` and deleting its closed neighbourhood."""
    members = vertex_set(w, g.n)
    if not members:
        raise ValueError("greedy_independent_set needs a nonempty vertex set")
    return tuple(sorted(kernels.greedy_independent_set(g, members)))


def lemma3_size_bound(size_w: int, d: float, u: float) -> float:
    """Guaranteed greedy independent-set size ``-log(|W|/u) / log((1-d)(1-1/u))``.

    Valid when every ``S`` with ``|S| >= u`` has minimum degree at most
    ``d(|S|-1)``.
    """
    if not 0.0 < d < 1.0 < u:
        raise ValueError(f"need 0 < d < 1 < u, got d={d}, u={u}")
    if size_w < u:
        raise ValueError(f"|W|={size_w} must be at least u={u}")
    return -math.log(size_w / u) / math.log((1.0 - d) * (1.0 - 1.0 / u))


def core_numbers(g: Graph, members: Iterable[int] | None = None) -> dict[int, int]:
    """Core number of each member, from the min-degree peeling order."""
    members = tuple(range(g.n)) if members is None else vertex_set(members, g.n)
    order, removal = kernels.degeneracy_order(g, members)
    out, level = {}, 0
    for v, d in zip(order, removal):
        level = max(level, d)
        out[v] = level
    return out


def _assemble(parts: list[tuple[list[int], list[int]]], **info) -> Coloring:
    """Join per-phase ``(vertices, local colours)`` into one fresh-palette colouring."""
    assignment: dict[int, int] = {}
    phases = []
    offset = 0
    for vertices, local in parts:
        used = (max(local) + 1) if local else 0
        for v, c in zip(vertices, local):
            assignment[v] = offset + c
        phases.append(used)
        offset += used
    return Coloring(assignment, offset, tuple(phases), info)


def _degeneracy_part(g: Graph, members: VertexSet) -> tuple[list[int], list[int], int]:
    order, removal = kernels.degeneracy_order(g, members)
    reverse = order[::-1]
    colors = kernels.color_in_order(g, reverse)
    return reverse, colors, max(removal, default=0)


def degeneracy_coloring(g: Graph, members: Iterable[int] | None = None) -> Coloring:
    """Peel minimum-degree vertices, then first-fit colour in reverse peel order.

    Uses at most ``degeneracy + 1`` colours; ``info['degeneracy']`` is the
    largest degree seen at removal time.
    """
    members = tuple(range(g.n)) if members is None else vertex_set(members, g.n)
    vertices, colors, degeneracy = _degeneracy_part(g, members)
    return _assemble([(vertices, colors)], degeneracy=degeneracy)


def greedy_sequential_coloring(g: Graph, members: Iterable[int] | None = None) -> Coloring:
    """First-fit colouring in ascending vertex order (comparison baseline)."""
    members = list(range(g.n)) if members is None else list(vertex_set(members, g.n))
    return _assemble([(members, kernels.color_in_order(g, members))])


def _extract_classes(g: Graph, members: VertexSet, stop, min_size: int = 1):
    uncolored = list(members)
    classes: list[tuple[int, ...]] = []
    while uncolored and not stop(len(uncolored)):
        found = kernels.greedy_independent_set(g, uncolored)
        if len(found) < min_size:
            break
        found_set = set(found)
        classes.append(tuple(sorted(found)))
        uncolored = [v for v in uncolored if v not in found_set]
    return classes, tuple(uncolored)


def _classes_part(classes) -> tuple[list[int], list[int]]:
    vertices, colors = [], []
    for c, members in enumerate(classes):
        vertices.extend(members)
        colors.extend([c] * len(members))
    return vertices, colors


def sparse_two_phase(g: Graph, members: Iterable[int], remainder: float) -> Coloring:
    """Greedy independent classes until at most ``remainder`` vertices are
    left, then a degeneracy colouring of what is left."""
    members = vertex_set(members, g.n)
    threshold = math.ceil(remainder)
    classes, rest = _extract_classes(g, members, lambda left: left <= threshold)
    rest_vertices, rest_colors, degeneracy = _degeneracy_part(g, rest)
    return _assemble(
        [_classes_part(classes), (rest_vertices, rest_colors)],
        remainder=len(rest),
        threshold=threshold,
        class_sizes=[len(c) for c in classes],
        degeneracy=degeneracy,
    )


def two_phase_color_sparse(g: Graph, z_set: Iterable[int], params: RegimeParams) -> Coloring:
    """Colour ``g[Z]`` for ``zp >> log n``.

    Phase 1 gives each greedy independent set of the uncoloured part a new
    colour until at most ``ceil(4u)`` vertices remain; phase 2 colours that
    remainder by degeneracy.  ``phases == (phase-1 colours, phase-2 colours)``.
    """
    params.require(Regime.SPARSE_LARGE_ZP)
    members = vertex_set(z_set, g.n)
    if len(members) > params.z:
        raise ValueError(f"|Z|={len(members)} exceeds z={params.z}")
    return sparse_two_phase(g, members, 4.0 * params.u)


def direct_degeneracy_color(g: Graph, z_set: Iterable[int], params: RegimeParams) -> Coloring:
    """Degeneracy colouring of ``g[Z]`` for ``zp << log n``; records whether
    at most ``2r`` colours were needed in ``info['within_bound']``."""
    params.require(Regime.SPARSE_SMALL_ZP)
    c = degeneracy_coloring(g, z_set)
    c.info["within_bound"] = c.num_colors <= 2 * params.r
    c.info["bound"] = 2 * params.r
    return c


def dense_two_phase(g: Graph, members: Iterable[int], k: int, m: float) -> Coloring:
    members = vertex_set(members, g.n)
    classes, rest = _extract_classes(g, members, lambda left: left <= m, min_size=k)
    return _assemble(
        [_classes_part(classes), (list(rest), list(range(len(rest))))],
        remainder=len(rest),
        class_sizes=[len(c) for c in classes],
    )


def two_phase_color_dense(g: Graph, z_set: Iterable[int], params: RegimeParams) -> Coloring:
    """Colour ``g[Z]`` for ``p`` bounded away from zero.

    Phase 1 keeps extracting greedy independent sets while they have at
    least ``k`` vertices and more than ``m`` vertices are uncoloured;
    phase 2 gives every remaining vertex its own colour.
    """
    params.require(Regime.DENSE)
    return dense_two_phase(g, z_set, params.k, params.m)


def _row_positions(sets: np.ndarray, rows, n: int) -> list[int]:
    if n ** sets.shape[1] >= 2**63:
        index = {tuple(row): i for i, row in enumerate(sets.tolist())}
        return [index[tuple(r)] for r in rows]
    # sets is in lexicographic order, so base-n keys are sorted
    weights = n ** np.arange(sets.shape[1] - 1, -1, -1, dtype=np.int64)
    keys = sets.astype(np.int64) @ weights
    wanted = np.asarray(rows, dtype=np.int64).reshape(-1, sets.shape[1]) @ weights
    return np.searchsorted(keys, wanted).tolist()


def clique_partition_color(g: Graph, r: int, *, search_iters: int | None = None,
                           seed: int = 0) -> Coloring:
    """Pack vertex-disjoint independent ``r``-sets, one colour each, then give
    every leftover vertex its own colour.

    The greedy packing is refined by a seeded local search over the list of
    all independent ``r``-sets (skipped when there are more than
    ``PACKING_SET_LIMIT`` of them, or when ``search_iters=0``).  By default
    the search runs ``min(50 m, 500000)`` rounds for ``m`` listed sets.
    """
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    classes, leftovers = kernels.independent_set_packing(g, r)
    greedy = len(classes)
    searched = False
    if r >= 2 and search_iters != 0 and classes:
        try:
            sets = kernels.list_independent_sets(g, r, PACKING_SET_LIMIT)
        except kernels.LIMIT_ERRORS:
            sets = None
        if sets is not None:
            iters = min(50 * len(sets), 500_000) if search_iters is None else search_iters
            chosen = kernels.improve_packing(
                g.n, sets, _row_positions(sets, classes, g.n), iters, seed
            )
            classes = [[int(v) for v in sets[i]] for i in chosen]
            covered = {v for c in classes for v in c}
            leftovers = [v for v in range(g.n) if v not in covered]
            searched = True
    return _assemble(
        [_classes_part(classes), (leftovers, list(range(len(leftovers))))],
        extracted=len(classes),
        greedy_extracted=greedy,
        searched=searched,
        r=r,
    )


def color_by_regime(g: Graph, z_set: Iterable[int], params: RegimeParams) -> Coloring:
    """Dispatch to the procedure matching ``params.regime_tag``."""
    if params.regime_tag is Regime.SPARSE_LARGE_ZP:
        return two_phase_color_sparse(g, z_set, params)
    if params.regime_tag is Regime.SPARSE_SMALL_ZP:
        return direct_degeneracy_color(g, z_set, params)
    return two_phase_color_dense(g, z_set, params)


# -- exhaustive event checks ----------------------------------------------

def _min_degree_of(rows: list[int], subset: tuple[int, ...]) -> int:
    mask = 0
    for v in subset:
        mask |= 1 << v
    return min((rows[v] & mask).bit_count() for v in subset)


def check_event_D(g: Graph, d: float, u: float, limit: int = EXHAUSTIVE_LIMIT) -> bool:
    """True iff every ``S`` with ``|S| >= u`` has ``min deg g[S] <= d(|S|-1)``.

    A violating ``S`` of size ``s`` has minimum degree above ``d(s-1)`` and
    therefore lies inside the (floor(d(s-1))+1)-core, so only core subsets are
    enumerated.
    """
    if g.n > limit:
        raise ValueError(f"n={g.n} exceeds the exhaustive limit of {limit}")
    rows = g.rows
    first = max(1, math.ceil(u))
    cores = core_numbers(g)
    for s in range(first, g.n + 1):
        need = math.floor(d * (s - 1)) + 1
        dom = [v for v in range(g.n) if cores[v] >= need]
        for subset in itertools.combinations(dom, s):
            if _min_degree_of(rows, subset) > d * (s - 1):
                return False
    return True


def check_event_E(g: Graph, r: int, max_size: int, limit: int = EXHAUSTIVE_LIMIT) -> bool:
    """True iff every ``S`` with ``|S| <= max_size`` has ``min deg g[S] <= 2r-1``.

    A violating set lies in the ``2r``-core.  An empty core settles the
    question, as does a core small enough to be a violating set itself;
    otherwise the core's subsets are enumerated, which needs the core to
    fit within ``limit`` vertices.
    """
    level = 2 * r
    cores = core_numbers(g)
    core = [v for v in range(g.n) if cores[v] >= level]
    if not core or max_size < 1:
        return True
    if len(core) <= max_size:
        return False
    if len(core) > limit:
        raise ValueError(
            f"exhaustive search over a {len(core)}-vertex core exceeds the limit of {limit}"
        )
    rows = g.rows
    for s in range(level + 1, max_size + 1):
        for subset in itertools.combinations(core, s):
            if _min_degree_of(rows, subset) >= level:
                return False
    return True
