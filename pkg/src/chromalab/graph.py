"""Dense bit-matrix graphs, seeded G(n, p) sampling and DIMACS-style I/O.

Adjacency is held as ``n`` rows of ``W = ceil(n / 64)`` little-endian
``uint64`` words: bit ``v`` of row ``u`` lives in word ``v >> 6`` at position
``v & 63``.  The matrix is read-only once a :class:`Graph` is built.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

__all__ = [
    "Graph",
    "SampleSpec",
    "VertexSet",
    "vertex_set",
    "sample_gnp",
    "complement",
    "induced_subgraph",
    "min_degree_vertex",
    "empty_graph",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "petersen_graph",
    "read_dimacs",
    "write_dimacs",
    "parse_dimacs",
    "format_dimacs",
]

VertexSet = tuple[int, ...]

_SEED_LIMIT = 1 << 64
# pairs drawn per RNG call while sampling; bounds peak memory, not the stream
_SAMPLE_CHUNK = 1 << 22


def _words(n: int) -> int:
    return max(1, (n + 63) >> 6)


def _pack(dense: np.ndarray) -> np.ndarray:
    n = dense.shape[0]
    w = _words(n)
    packed = np.packbits(dense, axis=1, bitorder="little")
    out = np.zeros((n, w * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return np.ascontiguousarray(out).view("<u8").astype(np.uint64, copy=False)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "bits", "edge_count", "_rows", "_csr", "_dense")

    def __init__(self, bits: np.ndarray, n: int | None = None):
        bits = np.ascontiguousarray(bits, dtype=np.uint64)
        if bits.ndim != 2:
            raise ValueError("bit matrix must be two-dimensional")
        if n is None:
            n = bits.shape[0]
        if bits.shape != (n, _words(n)):
            raise ValueError(f"bit matrix shape {bits.shape} does not fit n={n}")
        bits = bits.copy()
        bits.setflags(write=False)
        self.n = n
        self.bits = bits
        self._rows = None
        self._csr = None
        self._dense = None
        dense = self.to_dense()
        if n and (dense.diagonal().any() or not np.array_equal(dense, dense.T)):
            raise ValueError("adjacency must be symmetric and loop-free")
        self.edge_count = int(np.count_nonzero(dense)) // 2

    @classmethod
    def from_dense(cls, dense) -> "Graph":
        dense = np.asarray(dense, dtype=bool)
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        return cls(_pack(dense) if n else np.zeros((0, 1), np.uint64), n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        dense = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            dense[u, v] = dense[v, u] = True
        return cls.from_dense(dense)

    def to_dense(self) -> np.ndarray:
        """Boolean ``n x n`` adjacency matrix (cached, read-only)."""
        if self._dense is None:
            raw = np.unpackbits(
                self.bits.view(np.uint8), axis=1, bitorder="little"
            )[:, : self.n].astype(bool)
            raw.setflags(write=False)
            self._dense = raw
        return self._dense

    @property
    def rows(self) -> list[int]:
        """Adjacency rows as Python integers, for bitset arithmetic."""
        if self._rows is None:
            self._rows = [int.from_bytes(r.tobytes(), "little") for r in self.bits]
        return self._rows

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Compressed adjacency lists ``(indptr, indices)``, ascending per row."""
        if self._csr is None:
            dense = self.to_dense()
            indices = np.nonzero(dense)[1].astype(np.int64)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(dense.sum(axis=1), out=indptr[1:])
            self._csr = (indptr, indices)
        return self._csr

    def adjacent(self, u: int, v: int) -> bool:
        return bool((int(self.bits[u, v >> 6]) >> (v & 63)) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> np.ndarray:
        return self.to_dense().sum(axis=1)

    def neighbors(self, v: int) -> list[int]:
        return np.flatnonzero(self.to_dense()[v]).tolist()

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in ascending lexicographic order."""
        us, vs = np.nonzero(np.triu(self.to_dense(), 1))
        return zip(us.tolist(), vs.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def vertex_set(members: Iterable[int], n: int) -> VertexSet:
    """Normalise ``members`` to an ascending tuple of distinct vertices of ``[n]``."""
    out = tuple(sorted({int(v) for v in members}))
    if out and (out[0] < 0 or out[-1] >= n):
        bad = out[0] if out[0] < 0 else out[-1]
        raise ValueError(f"vertex {bad} outside [0, {n})")
    return out


@dataclass(frozen=True)
class SampleSpec:
    """Parameters identifying one G(n, p) sample."""

    n: int
    p: float
    seed: int
    trial_index: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.trial_index < 0:
            raise ValueError("trial_index must be >= 0")

    def generator(self) -> np.random.Generator:
        """Counter-based stream keyed on ``(seed, trial_index)``.

        Draw number ``k`` of the stream belongs to pair number ``k`` in
        row-major upper-triangle order, so the result never depends on how
        the draws are chunked.
        """
        key = np.random.SeedSequence([self.seed, self.trial_index]).generate_state(
            2, np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))


def sample_gnp(spec: SampleSpec) -> Graph:
    n, p = spec.n, spec.p
    dense = np.zeros((n, n), dtype=bool)
    if n < 2 or p == 0.0:
        return Graph.from_dense(dense)
    rng = spec.generator()
    row_len = n - 1 - np.arange(n)
    start = 0
    while start < n - 1:
        stop = start
        count = 0
        while stop < n - 1 and (count == 0 or count + row_len[stop] <= _SAMPLE_CHUNK):
            count += int(row_len[stop])
            stop += 1
        hits = rng.random(count) < p
        rows = np.repeat(np.arange(start, stop), row_len[start:stop])
        offsets = np.repeat(np.cumsum(row_len[start:stop]) - row_len[start:stop], row_len[start:stop])
        cols = np.arange(count) - offsets + rows + 1
        dense[rows[hits], cols[hits]] = True
        start = stop
    dense |= dense.T
    return Graph.from_dense(dense)


def complement(g: Graph) -> Graph:
    n = g.n
    if n == 0:
        return g
    bits = ~g.bits
    tail = n & 63
    if tail:
        bits[:, -1] &= np.uint64((1 << tail) - 1)
    idx = np.arange(n)
    bits[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
    return Graph(bits, n)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on ``s``; vertex ``s[i]`` (ascending) becomes vertex ``i``."""
    members = np.asarray(vertex_set(s, g.n), dtype=np.int64)
    if len(members) == g.n:
        return g
    return Graph.from_dense(g.to_dense()[np.ix_(members, members)])


def min_degree_vertex(g: Graph, s: Iterable[int]) -> tuple[int, int]:
    """Vertex of minimum degree in ``g[s]`` (smallest index on ties) and that degree."""
    from . import kernels

    members = vertex_set(s, g.n)
    if not members:
        raise ValueError("min_degree_vertex needs a nonempty vertex set")
    return kernels.min_degree_vertex(g, members)


# -- small named graphs -----------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph.from_dense(np.zeros((n, n), dtype=bool))


def complete_graph(n: int) -> Graph:
    return Graph.from_dense(~np.eye(n, dtype=bool))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# -- DIMACS-like text format -----------------------------------------------

def format_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_dimacs(g: Graph, fh: TextIO) -> None:
    fh.write(format_dimacs(g))


def parse_dimacs(text: str) -> Graph:
    return read_dimacs(io.StringIO(text))


def read_dimacs(fh: TextIO) -> Graph:
    """Read ``p edge n m`` followed by ``e u v`` lines (1-based endpoints).

    Lines starting with ``c`` and blank lines are ignored.  The declared
    edge count must match the number of distinct edges read.
    """
    n = declared = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(fh, 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] != "edge":
                raise ValueError(f"line {lineno}: malformed problem line")
            n, declared = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed edge line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            edges.append((u, v))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing 'p edge n m' line")
    g = Graph.from_edges(n, edges)
    if g.edge_count != declared:
        raise ValueError(f"header declares {declared} edges, found {g.edge_count}")
    return g

