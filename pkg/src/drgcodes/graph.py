"""Finite simple graphs stored as bitset rows, plus the structural transforms.

Vertices are the integers ``0..n-1``. Row ``v`` of a graph is a Python int whose
bit ``u`` is set when ``u`` is adjacent to ``v``. Graphs are immutable; every
transform returns a new graph.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, vertex: int, source: int = 0):
        super().__init__(f"graph is disconnected: vertex {vertex} unreachable from {source}")
        self.vertex = vertex


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    rows: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise GraphError(f"expected {self.n} rows, got {len(self.rows)}")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label count does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            if row & ~full:
                raise GraphError(f"row {v} references a vertex >= n")
            for u in bits(row):
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency {v}->{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    @classmethod
    def from_adjacency(cls, n: int, adjacent, labels=None) -> Graph:
        """Build from a symmetric predicate ``adjacent(u, v)``."""
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if adjacent(u, v)]
        return cls.from_edges(n, edges, labels)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"

    def neighbors(self, v: int) -> list[int]:
        return bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    @cached_property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1))]

    @cached_property
    def valency(self) -> int | None:
        """Common degree, or None when the graph is not regular."""
        degs = {self.degree(v) for v in range(self.n)}
        return degs.pop() if len(degs) == 1 else None

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    @cached_property
    def sparse(self) -> csr_matrix:
        e = self.edges()
        if not e:
            return csr_matrix((self.n, self.n), dtype=np.int32)
        u, v = np.array(e).T
        data = np.ones(2 * len(e), dtype=np.int32)
        return csr_matrix((data, (np.r_[u, v], np.r_[v, u])), shape=(self.n, self.n))

    def matrix(self) -> np.ndarray:
        return self.sparse.toarray()

    @cached_property
    def distances(self) -> DistanceTable:
        return distance_table(self)


@dataclass(frozen=True, eq=False)
class DistanceTable:
    dist: np.ndarray
    diameter: int
    girth: float  # math.inf for forests

    def sphere(self, v: int, i: int) -> list[int]:
        return np.flatnonzero(self.dist[v] == i).tolist()


def bfs_distances(g: Graph, v: int) -> list[int]:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    row = [-1] * g.n
    seen = frontier = 1 << v
    level = 0
    while frontier:
        for u in bits(frontier):
            row[u] = level
        nxt = 0
        for u in bits(frontier):
            nxt |= g.rows[u]
        frontier = nxt & ~seen
        seen |= frontier
        level += 1
    if -1 in row:
        raise DisconnectedGraphError(row.index(-1), v)
    return row


def _level_counts(g: Graph, dist: np.ndarray, offset: int) -> np.ndarray:
    """``out[x, v]`` = number of neighbours of x at distance ``dist[x, v] + offset`` from v."""
    out = np.zeros(dist.shape, dtype=np.int32)
    diameter = int(dist.max())
    for j in range(diameter + 1):
        target = j + offset
        if not 0 <= target <= diameter:
            continue
        counts = np.asarray(g.sparse @ (dist == target).astype(np.int32))
        mask = dist == j
        out[mask] = counts[mask]
    return out


def distance_table(g: Graph) -> DistanceTable:
    if g.n == 0:
        raise GraphError("empty graph")
    d = shortest_path(g.sparse, method="D", unweighted=True, directed=False)
    if np.isinf(d).any():
        src, dst = np.argwhere(np.isinf(d))[0]
        raise DisconnectedGraphError(int(dst), int(src))
    dist = d.astype(np.int16)
    dist.setflags(write=False)
    return DistanceTable(dist, int(dist.max()), _girth(g, dist))


def _girth(g: Graph, dist: np.ndarray) -> float:
    # Minimum over BFS roots of the first cycle closed in the BFS tree.
    best = math.inf
    e = g.edges()
    if not e:
        return best
    u, w = np.array(e).T
    same = dist[:, u] == dist[:, w]
    if same.any():
        best = 2 * int(dist[:, u][same].min()) + 1
    below = _level_counts(g, dist, -1)
    two_parents = below >= 2
    if two_parents.any():
        best = min(best, 2 * int(dist[two_parents].min()))
    return best


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    seen = frontier = 1
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= g.rows[u]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << g.n) - 1


def components(g: Graph) -> list[list[int]]:
    left = (1 << g.n) - 1
    out = []
    while left:
        start = left & -left
        seen = frontier = start
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= g.rows[u]
            frontier = nxt & ~seen
            seen |= frontier
        out.append(bits(seen))
        left &= ~seen
    return out


def line_graph(g: Graph) -> tuple[Graph, list[tuple[int, int]]]:
    """Line graph with vertices ordered as ``g.edges()`` (lexicographic endpoint pairs).

    Returns the graph and the edge map: entry ``i`` is the endpoint pair of
    line-graph vertex ``i``.
    """
    emap = g.edges()
    if not emap:
        raise GraphError("line graph of an edgeless graph")
    incident = [0] * g.n
    for i, (u, v) in enumerate(emap):
        incident[u] |= 1 << i
        incident[v] |= 1 << i
    rows = tuple((incident[u] | incident[v]) & ~(1 << i) for i, (u, v) in enumerate(emap))
    labels = None
    if g.labels is not None:
        labels = tuple(f"{g.labels[u]}|{g.labels[v]}" for u, v in emap)
    return Graph(len(emap), rows, labels), emap


def distance_i_graph(g: Graph, i: int) -> Graph:
    dt = g.distances
    if not 1 <= i <= dt.diameter:
        raise GraphError(f"distance {i} outside 1..{dt.diameter}")
    if i == 1:
        return g
    rows = tuple(mask_of(np.flatnonzero(dt.dist[v] == i).tolist()) for v in range(g.n))
    return Graph(g.n, rows, g.labels)


def antipodal_classes(g: Graph) -> list[list[int]] | None:
    """Classes of the relation "distance 0 or diameter", if it is an equivalence
    relation with classes of equal size; fibers are ordered by least vertex."""
    dt = g.distances
    d = dt.diameter
    if d < 2:
        return None
    rel = (dt.dist == 0) | (dt.dist == d)
    seen = np.zeros(g.n, dtype=bool)
    fibers = []
    for v in range(g.n):
        if seen[v]:
            continue
        cls = np.flatnonzero(rel[v])
        if not (rel[np.ix_(cls, cls)].all() and (rel[cls].sum(axis=1) == len(cls)).all()):
            return None
        seen[cls] = True
        fibers.append(cls.tolist())
    if len({len(f) for f in fibers}) != 1:
        return None
    return fibers


def _check_partition(n: int, parts: Sequence[Sequence[int]]) -> list[int]:
    owner = [-1] * n
    for i, part in enumerate(parts):
        if not part:
            raise GraphError("empty class in partition")
        for v in part:
            if not 0 <= v < n or owner[v] != -1:
                raise GraphError(f"invalid partition at vertex {v}")
            owner[v] = i
    if -1 in owner:
        raise GraphError(f"vertex {owner.index(-1)} not covered by partition")
    return owner


def folded_graph(g: Graph, fibers: Sequence[Sequence[int]]) -> Graph:
    owner = _check_partition(g.n, fibers)
    edges = set()
    for u, v in g.edges():
        a, b = owner[u], owner[v]
        if a == b:
            raise GraphError(f"edge {u}-{v} inside a fiber")
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(fibers), sorted(edges))


def bipartition(g: Graph) -> tuple[list[int], list[int]] | None:
    """The two colour classes (the one containing vertex 0 first), or None."""
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] != -1:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return None
    return ([v for v in range(g.n) if colour[v] == 0],
            [v for v in range(g.n) if colour[v] == 1])


def bipartite_half(g: Graph, side: int) -> Graph:
    """Distance-2 graph on one colour class; side 0 is the class of vertex 0."""
    if side not in (0, 1):
        raise GraphError("side must be 0 or 1")
    if not is_connected(g):
        raise DisconnectedGraphError(components(g)[1][0])
    parts = bipartition(g)
    if parts is None:
        raise GraphError("graph is not bipartite")
    part = parts[side]
    index = {v: i for i, v in enumerate(part)}
    rows = []
    for v in part:
        two = 0
        for w in g.neighbors(v):
            two |= g.rows[w]
        two &= ~(1 << v)
        rows.append(mask_of(index[u] for u in bits(two)))
    labels = tuple(g.labels[v] for v in part) if g.labels is not None else None
    return Graph(len(part), tuple(rows), labels)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    vs = sorted(set(vertices))
    if not vs:
        raise GraphError("empty vertex set")
    if vs[0] < 0 or vs[-1] >= g.n:
        raise GraphError("vertex out of range")
    index = {v: i for i, v in enumerate(vs)}
    keep = mask_of(vs)
    rows = tuple(mask_of(index[u] for u in bits(g.rows[v] & keep)) for v in vs)
    labels = tuple(g.labels[v] for v in vs) if g.labels is not None else None
    return Graph(len(vs), rows, labels)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~r & ~(1 << v) for v, r in enumerate(g.rows)), g.labels)


# ---------------------------------------------------------------- file formats

def to_text(g: Graph) -> str:
    e = g.edges()
    return "\n".join([f"{g.n} {len(e)}", *(f"{u} {v}" for u, v in e)]) + "\n"


def from_text(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise GraphError("header must be 'n m'")
    n, m = map(int, lines[0])
    edges = [tuple(map(int, ln)) for ln in lines[1:]]
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise GraphError(f"expected {m} edge lines")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {u} {v} out of range")
    return Graph.from_edges(n, edges)


def to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()],
            "labels": list(g.labels) if g.labels is not None else []}


def from_json(data: dict | str) -> Graph:
    if isinstance(data, str):
        data = json.loads(data)
    labels = data.get("labels") or None
    return Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]], labels)
