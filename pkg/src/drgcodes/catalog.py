"""Named graph constructors and the registry of tabulated intersection arrays.

Every registered builder is checked against its intersection array (and the
tabulated n, d, g) before a graph is handed out.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import geometry as geo
from .drg import (
    IntersectionArray,
    bipartite_double_minus_matching_array,
    complete_array,
    cycle_array,
    doubled_odd_array,
    hypercube_array,
    k_sequence,
    odd_array,
    verify_intersection_array,
)
from .graph import (
    Graph,
    antipodal_classes,
    bipartite_half,
    complement,
    components,
    folded_graph,
    induced_subgraph,
    is_connected,
    line_graph,
)


class CatalogError(KeyError):
    def __str__(self):
        return str(self.args[0])


class VerificationError(RuntimeError):
    pass


# ------------------------------------------------------------ constructors

def complete(n: int) -> Graph:
    return Graph.from_adjacency(n, lambda u, v: True)


def complete_multipartite(*parts: int) -> Graph:
    owner = [i for i, p in enumerate(parts) for _ in range(p)]
    return Graph.from_adjacency(len(owner), lambda u, v: owner[u] != owner[v])


def complete_bipartite_minus_matching(n: int) -> Graph:
    """K*_{n,n}: vertex i on the left (0..n-1) is adjacent to n+j for j != i."""
    return Graph.from_edges(2 * n, [(i, n + j) for i in range(n) for j in range(n) if i != j])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def lcf(n: int, shifts: list[int], repeats: int) -> Graph:
    jumps = shifts * repeats
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    edges |= {tuple(sorted((i, (i + jumps[i]) % n))) for i in range(n)}
    return Graph.from_edges(n, sorted(edges))


def generalized_petersen(n: int, k: int) -> Graph:
    edges = []
    for i in range(n):
        edges += [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]
    return Graph.from_edges(2 * n, edges)


def colex_subsets(ground: int, size: int) -> list[tuple[int, ...]]:
    return sorted(itertools.combinations(range(ground), size), key=lambda s: s[::-1])


def odd(n: int) -> Graph:
    """O_n: (n-1)-subsets of a (2n-1)-set in colex order, adjacent when disjoint."""
    subs = [frozenset(s) for s in colex_subsets(2 * n - 1, n - 1)]
    labels = ["{" + ",".join(map(str, sorted(s))) + "}" for s in subs]
    return Graph.from_adjacency(len(subs), lambda u, v: not subs[u] & subs[v], labels)


def doubled_odd(n: int) -> Graph:
    """DO_n: (n-1)-subsets then n-subsets of a (2n-1)-set (each block colex), adjacent by inclusion."""
    small = [frozenset(s) for s in colex_subsets(2 * n - 1, n - 1)]
    large = [frozenset(s) for s in colex_subsets(2 * n - 1, n)]
    index = {s: len(small) + i for i, s in enumerate(large)}
    edges = [(i, index[s | {x}]) for i, s in enumerate(small) for x in range(2 * n - 1) if x not in s]
    labels = ["{" + ",".join(map(str, sorted(s))) + "}" for s in small + large]
    return Graph.from_edges(len(small) + len(large), edges, labels)


def hypercube(n: int) -> Graph:
    """Q_n on bitmask-encoded subsets of an n-set (integer order = colex order)."""
    return Graph.from_edges(2 ** n, [(v, v | 1 << i) for v in range(2 ** n) for i in range(n)
                                     if not v >> i & 1])


def folded_cube(n: int) -> Graph:
    q = hypercube(n)
    return folded_graph(q, antipodal_classes(q))


def paley(q: int) -> Graph:
    F = geo.field(q)
    squares = {F.mul[x][x] for x in range(1, q)}
    return Graph.from_adjacency(q, lambda u, v: F.sub(u, v) in squares)


def triangular(n: int) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    return Graph.from_adjacency(len(pairs), lambda u, v: bool(set(pairs[u]) & set(pairs[v])))


def lattice(n: int) -> Graph:
    """L_2(n) = K_n x K_n rook's graph, vertex (i, j) -> n*i + j."""
    return Graph.from_adjacency(n * n, lambda u, v: u // n == v // n or u % n == v % n)


def shrikhande() -> Graph:
    conn = {(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)}
    return Graph.from_adjacency(
        16, lambda u, v: ((u // 4 - v // 4) % 4, (u % 4 - v % 4) % 4) in conn)


def hamming(d: int, q: int) -> Graph:
    words = list(itertools.product(range(q), repeat=d))
    return Graph.from_adjacency(
        len(words), lambda u, v: sum(a != b for a, b in zip(words[u], words[v])) == 1)


def icosahedron() -> Graph:
    """0 = top, 1..5 upper ring, 6..10 lower ring, 11 = bottom."""
    edges = []
    for i in range(5):
        u, w = 1 + i, 6 + i
        edges += [(0, u), (u, 1 + (i + 1) % 5), (u, w), (u, 6 + (i + 1) % 5),
                  (w, 6 + (i + 1) % 5), (w, 11)]
    return Graph.from_edges(12, edges)


def hoffman_singleton() -> Graph:
    """Pentagons P_h and pentagrams Q_i; P_h[j] ~ Q_i[h*i + j]. P_h[j] -> 5h+j, Q_i[j] -> 25+5i+j."""
    edges = []
    for h in range(5):
        for j in range(5):
            edges.append((5 * h + j, 5 * h + (j + 1) % 5))
            edges.append((25 + 5 * h + j, 25 + 5 * h + (j + 2) % 5))
            for i in range(5):
                edges.append((5 * h + j, 25 + 5 * i + (h * i + j) % 5))
    return Graph.from_edges(50, edges)


def sylvester() -> Graph:
    """Hoffman-Singleton graph minus an edge and all neighbours of its ends."""
    hs = hoffman_singleton()
    u, v = 0, 1
    drop = {u, v, *hs.neighbors(u), *hs.neighbors(v)}
    return induced_subgraph(hs, [x for x in range(hs.n) if x not in drop])


def fano_lines() -> list[tuple[int, ...]]:
    return sorted(tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7))


def coxeter() -> Graph:
    """O_4 with the seven lines of a Fano plane deleted."""
    o4 = odd(4)
    lines = {frozenset(l) for l in fano_lines()}
    subs = [frozenset(s) for s in colex_subsets(7, 3)]
    return induced_subgraph(o4, [i for i, s in enumerate(subs) if s not in lines])


def _psl27():
    """Elements of PSL(2,7) as canonical 2x2 matrices (a, b, c, d) mod 7 up to sign."""

    def canon(m):
        neg = tuple((-x) % 7 for x in m)
        return min(m, neg)

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return canon(((a * e + b * g) % 7, (a * f + b * h) % 7,
                      (c * e + d * g) % 7, (c * f + d * h) % 7))

    elems = sorted({canon(m) for m in itertools.product(range(7), repeat=4)
                    if (m[0] * m[3] - m[1] * m[2]) % 7 == 1})
    return elems, mul, canon((1, 0, 0, 1))


def klein() -> Graph:
    """Vertex graph of the Klein map {3,7}: cosets of an order-7 rotation in PSL(2,7)."""
    elems, mul, one = _psl27()

    def order(x):
        k, y = 1, x
        while y != one:
            y, k = mul(y, x), k + 1
        return k

    def generated(gens):
        seen, frontier = {one}, [one]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = mul(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    a = (1, 1, 0, 1)
    rot = [one]
    for _ in range(6):
        rot.append(mul(rot[-1], a))
    for b in elems:
        if order(b) == 2 and order(mul(a, b)) == 3 and len(generated([a, b])) == 168:
            break
    coset = {}
    reps = []
    for g in elems:
        key = min(mul(g, r) for r in rot)
        if key not in coset:
            coset[key] = len(reps)
            reps.append(key)
    edges = set()
    for g in reps:
        for r in rot:
            h = mul(mul(g, r), b)
            u, v = coset[g], coset[min(mul(h, r2) for r2 in rot)]
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(len(reps), sorted(edges))


def design_incidence(npoints: int, blocks) -> Graph:
    blocks = sorted(tuple(sorted(b)) for b in blocks)
    edges = [(p, npoints + j) for j, b in enumerate(blocks) for p in b]
    return Graph.from_edges(npoints + len(blocks), edges)


def ig_complement_fano() -> Graph:
    """IG(7,4,2): blocks are complements of the Fano lines."""
    return design_incidence(7, [set(range(7)) - set(l) for l in fano_lines()])


def ig_paley_biplane() -> Graph:
    """IG(11,5,2): translates of the quadratic residues mod 11."""
    qr = {x * x % 11 for x in range(1, 11)}
    return design_incidence(11, [{(x + i) % 11 for x in qr} for i in range(11)])


def ig_affine_minus_parallel_class(q: int) -> Graph:
    """Incidence graph of AG(2,q) minus its vertical parallel class: lines y = m x + c."""
    F = geo.field(q)
    pts = [(x, y) for x in range(q) for y in range(q)]
    index = {p: i for i, p in enumerate(pts)}
    blocks = [{index[(x, F.add[F.mul[m][x]][c])] for x in range(q)} for m in range(q) for c in range(q)]
    return design_incidence(len(pts), blocks)


def gh22_halves() -> tuple[Graph, Graph]:
    """Point graphs of H(2) and its dual, as the two halves of the Tutte 12-cage."""
    cage = geo.incidence_graph(geo.split_cayley_hexagon(2))
    return bipartite_half(cage, 0), bipartite_half(cage, 1)


def gamma3_connected(g: Graph, v: int = 0) -> bool:
    """Whether the subgraph induced on the vertices at distance 3 from v is connected."""
    return is_connected(induced_subgraph(g, g.distances.sphere(v, 3)))


def gh22_graph(which: int) -> Graph:
    """GH(2,2) point graph with disconnected (1) or connected (2) distance-3 subgraph."""
    halves = [h for h in gh22_halves() if gamma3_connected(h) == (which == 2)]
    if len(halves) != 1:
        raise VerificationError("the two GH(2,2) halves are not separated by the distance-3 test")
    return halves[0]


def _lg(g: Graph) -> Graph:
    return line_graph(g)[0]


def _ig(geom_fn, q):
    return lambda: geo.incidence_graph(geom_fn(q))


# ------------------------------------------------------------ registry

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    array: IntersectionArray
    n: int
    d: int
    g: int
    expected_verdict: str  # "yes" | "no"
    expected_reason: str
    table: int
    has_builder: bool
    line_graph_base: str | None = None
    desk_infeasible: bool = False

    @property
    def k(self) -> int:
        return self.array.k

    def to_dict(self) -> dict:
        return {"name": self.name, "table": self.table, "array": str(self.array),
                "n": self.n, "d": self.d, "g": self.g, "expected_verdict": self.expected_verdict,
                "expected_reason": self.expected_reason, "has_builder": self.has_builder,
                "line_graph_base": self.line_graph_base}


BUILDERS: dict[str, Callable[[], Graph]] = {
    "K_4": lambda: complete(4),
    "K_{3,3}": lambda: complete_multipartite(3, 3),
    "K*_{4,4}": lambda: complete_bipartite_minus_matching(4),
    "Petersen": lambda: odd(3),
    "Heawood": _ig(geo.projective_plane, 2),
    "Pappus": lambda: lcf(18, [5, 7, -7, 7, -7, -5], 3),
    "Desargues": lambda: generalized_petersen(10, 3),
    "Dodecahedron": lambda: generalized_petersen(10, 2),
    "Coxeter": coxeter,
    "Tutte's 8-cage": _ig(geo.symplectic_gq, 2),
    "Foster": lambda: lcf(90, [17, -9, 37, -37, 9, -17], 15),
    "Tutte's 12-cage": _ig(geo.split_cayley_hexagon, 2),
    "K_5": lambda: complete(5),
    "K_{2,2,2}": lambda: complete_multipartite(2, 2, 2),
    "K_{4,4}": lambda: complete_multipartite(4, 4),
    "P(9)": lambda: paley(9),
    "K*_{5,5}": lambda: complete_bipartite_minus_matching(5),
    "IG(7,4,2)": ig_complement_fano,
    "L(Petersen)": lambda: _lg(build("Petersen")),
    "Q_4": lambda: hypercube(4),
    "L(Heawood)": lambda: _lg(build("Heawood")),
    "IG(13,4,1)": _ig(geo.projective_plane, 3),
    "IG(A(2,4)\\pc)": lambda: ig_affine_minus_parallel_class(4),
    "O_4": lambda: odd(4),
    "L(Tutte's 8-cage)": lambda: _lg(build("Tutte's 8-cage")),
    "DO_4": lambda: doubled_odd(4),
    "IG(GQ(3,3))": _ig(geo.symplectic_gq, 3),
    "L(Tutte's 12-cage)": lambda: _lg(build("Tutte's 12-cage")),
    "IG(GH(3,3))": _ig(geo.split_cayley_hexagon, 3),
    "K_6": lambda: complete(6),
    "K_{5,5}": lambda: complete_multipartite(5, 5),
    "Icosahedron": icosahedron,
    "K*_{6,6}": lambda: complete_bipartite_minus_matching(6),
    "Folded 5-cube": lambda: folded_cube(5),
    "IG(11,5,2)": ig_paley_biplane,
    "Q_5": lambda: hypercube(5),
    "Sylvester": sylvester,
    "IG(21,5,1)": _ig(geo.projective_plane, 4),
    "IG(A(2,5)\\pc)": lambda: ig_affine_minus_parallel_class(5),
    "O_5": lambda: odd(5),
    "IG(GQ(4,4))": _ig(geo.symplectic_gq, 4),
    "DO_5": lambda: doubled_odd(5),
    "K_7": lambda: complete(7),
    "K_{2,2,2,2}": lambda: complete_multipartite(2, 2, 2, 2),
    "K_{3,3,3}": lambda: complete_multipartite(3, 3, 3),
    "T(5)": lambda: triangular(5),
    "P(13)": lambda: paley(13),
    "T(6)-bar": lambda: complement(triangular(6)),
    "L_2(4)": lambda: lattice(4),
    "H(3,3)": lambda: hamming(3, 3),
    "halved Foster": lambda: bipartite_half(build("Foster"), 0),
    "L(IG(13,4,1))": lambda: _lg(build("IG(13,4,1)")),
    "GH(2,2) Graph 1": lambda: gh22_graph(1),
    "GH(2,2) Graph 2": lambda: gh22_graph(2),
    "L(IG(GQ(3,3)))": lambda: _lg(build("IG(GQ(3,3))")),
    "L(IG(GH(3,3)))": lambda: _lg(build("IG(GH(3,3))")),
    "K_8": lambda: complete(8),
    "Klein": klein,
}

# Further graphs: name -> (intersection array, builder). Shrikhande and GQ(2,2)
# share an array with a tabulated row.
EXTRA_BUILDERS: dict[str, tuple[str, Callable[[], Graph]]] = {
    "Shrikhande": ("6,3;1,2", shrikhande),
    "GQ(2,2)": ("6,4;1,3", lambda: geo.point_graph(geo.symplectic_gq(2))),
    "Hoffman-Singleton": ("7,6;1,1", hoffman_singleton),
}

ALIASES = {
    "K*_{3,3}": "K*_{4,4}",
    "P9": "P(9)", "Paley(9)": "P(9)", "P(13)": "P(13)", "Paley(13)": "P(13)",
    "Tutte-Coxeter": "Tutte's 8-cage", "Tutte 8-cage": "Tutte's 8-cage",
    "Tutte 12-cage": "Tutte's 12-cage", "L(Tutte-Coxeter)": "L(Tutte's 8-cage)",
    "Tutte's 8-cage line graph": "L(Tutte's 8-cage)",
    "IG(PG(2,2))": "Heawood", "IG(PG(2,3))": "IG(13,4,1)", "IG(PG(2,4))": "IG(21,5,1)",
    "IG(W(2))": "Tutte's 8-cage", "IG(W(3))": "IG(GQ(3,3))", "IG(W(4))": "IG(GQ(4,4))",
    "IG(GH(2,2))": "Tutte's 12-cage", "IG(H(2))": "Tutte's 12-cage", "IG(H(3))": "IG(GH(3,3))",
    "complement T(6)": "T(6)-bar", "L_2(3)": "P(9)",
    "GH(2,2) graph 1": "GH(2,2) Graph 1", "GH(2,2) graph 2": "GH(2,2) Graph 2",
    "Armanios–Wells": "Armanios-Wells", "Biggs–Smith": "Biggs-Smith",
}

# name, array, n, d, g, verdict, reason, line-graph base
_TABLES: dict[int, list[tuple]] = {
    1: [
        ("K_4", "3;1", 4, 1, 3, "yes", "CompleteGraph"),
        ("K_{3,3}", "3,2;1,3", 6, 2, 4, "no", "Divisibility"),
        ("K*_{4,4}", "3,2,1;1,2,3", 8, 3, 4, "yes", "BipartiteD3"),
        ("Petersen", "3,2;1,1", 10, 2, 5, "no", "Divisibility"),
        ("Heawood", "3,2,2;1,1,3", 14, 3, 6, "no", "Divisibility"),
        ("Pappus", "3,2,2,1;1,1,2,3", 18, 4, 6, "no", "Divisibility"),
        ("Desargues", "3,2,2,1,1;1,1,2,2,3", 20, 5, 6, "no", "AntipodalD45"),
        ("Dodecahedron", "3,2,1,1,1;1,1,1,2,3", 20, 5, 5, "no", "AntipodalD45"),
        ("Coxeter", "3,2,2,1;1,1,1,2", 28, 4, 7, "yes", "CoxeterCode"),
        ("Tutte's 8-cage", "3,2,2,2;1,1,1,3", 30, 4, 8, "no", "Divisibility"),
        ("Foster", "3,2,2,2,2,1,1,1;1,1,1,1,2,2,2,3", 90, 8, 10, "no", "Divisibility"),
        ("Biggs-Smith", "3,2,2,2,1,1,1;1,1,1,1,1,1,3", 102, 7, 9, "no", "Divisibility"),
        ("Tutte's 12-cage", "3,2,2,2,2,2;1,1,1,1,1,3", 126, 6, 12, "no", "Divisibility"),
    ],
    2: [
        ("K_5", "4;1", 5, 1, 3, "yes", "CompleteGraph"),
        ("K_{2,2,2}", "4,1;1,4", 6, 2, 3, "no", "Divisibility"),
        ("K_{4,4}", "4,3;1,4", 8, 2, 4, "no", "Divisibility"),
        ("P(9)", "4,2;1,2", 9, 2, 3, "no", "Divisibility"),
        ("K*_{5,5}", "4,3,1;1,3,4", 10, 3, 4, "yes", "BipartiteD3"),
        ("IG(7,4,2)", "4,3,2;1,2,4", 14, 3, 4, "no", "Divisibility"),
        ("L(Petersen)", "4,2,1;1,1,4", 15, 3, 3, "yes", "AntipodalD3", "Petersen"),
        ("Q_4", "4,3,2,1;1,2,3,4", 16, 4, 4, "no", "Divisibility"),
        ("L(Heawood)", "4,2,2;1,1,2", 21, 3, 3, "no", "Divisibility", "Heawood"),
        ("IG(13,4,1)", "4,3,3;1,1,4", 26, 3, 6, "no", "Divisibility"),
        ("IG(A(2,4)\\pc)", "4,3,3,1;1,1,3,4", 32, 4, 6, "no", "Divisibility"),
        ("O_4", "4,3,3;1,1,2", 35, 3, 6, "yes", "O4Code"),
        ("L(Tutte's 8-cage)", "4,2,2,2;1,1,1,2", 45, 4, 3, "yes", "LineGraphGQ", "Tutte's 8-cage"),
        ("DO_4", "4,3,3,2,2,1,1;1,1,2,2,3,3,4", 70, 7, 6, "yes", "DoubleOdd"),
        ("IG(GQ(3,3))", "4,3,3,3;1,1,1,4", 80, 4, 8, "no", "NoEigenvalueMinusOne"),
        ("L(Tutte's 12-cage)", "4,2,2,2,2,2;1,1,1,1,1,2", 189, 6, 3, "no", "Divisibility", "Tutte's 12-cage"),
        ("IG(GH(3,3))", "4,3,3,3,3,3;1,1,1,1,1,4", 728, 6, 12, "no", "Divisibility"),
    ],
    3: [
        ("K_6", "5;1", 6, 1, 3, "yes", "CompleteGraph"),
        ("K_{5,5}", "5,4;1,5", 10, 2, 4, "no", "Divisibility"),
        ("Icosahedron", "5,2,1;1,2,5", 12, 3, 3, "yes", "AntipodalD3"),
        ("K*_{6,6}", "5,4,1;1,4,5", 12, 3, 4, "yes", "BipartiteD3"),
        ("Folded 5-cube", "5,4;1,2", 16, 2, 4, "no", "Divisibility"),
        ("IG(11,5,2)", "5,4,3;1,2,5", 22, 3, 4, "no", "Divisibility"),
        ("Q_5", "5,4,3,2,1;1,2,3,4,5", 32, 5, 4, "no", "Divisibility"),
        ("Armanios-Wells", "5,4,1,1;1,1,4,5", 32, 4, 5, "no", "Divisibility"),
        ("Sylvester", "5,4,2;1,1,4", 36, 3, 5, "yes", "SylvesterCode"),
        ("IG(21,5,1)", "5,4,4;1,1,5", 42, 3, 6, "no", "NoEigenvalueMinusOne"),
        ("IG(A(2,5)\\pc)", "5,4,4,1;1,1,4,5", 50, 4, 6, "no", "Divisibility"),
        ("O_5", "5,4,4,3;1,1,2,2", 126, 4, 6, "no", "NoEigenvalueMinusOne"),
        ("IG(GQ(4,4))", "5,4,4,4;1,1,1,5", 170, 4, 8, "no", "Divisibility"),
        ("DO_5", "5,4,4,3,3,2,2,1,1;1,1,2,2,3,3,4,4,5", 252, 9, 6, "no", "DoubleOdd"),
        ("IG(GH(4,4))", "5,4,4,4,4,4;1,1,1,1,1,5", 2730, 6, 12, "no", "NoEigenvalueMinusOne"),
    ],
    4: [
        ("K_7", "6;1", 7, 1, 3, "yes", "CompleteGraph"),
        ("K_{2,2,2,2}", "6,1;1,6", 8, 2, 3, "no", "Divisibility"),
        ("K_{3,3,3}", "6,2;1,6", 9, 2, 3, "no", "Divisibility"),
        ("T(5)", "6,2;1,4", 10, 2, 3, "no", "Divisibility"),
        ("P(13)", "6,3;1,3", 13, 2, 3, "no", "Divisibility"),
        ("T(6)-bar", "6,4;1,3", 15, 2, 3, "no", "Divisibility"),
        ("L_2(4)", "6,3;1,2", 16, 2, 3, "no", "Divisibility"),
        ("H(3,3)", "6,4,2;1,2,3", 27, 3, 3, "no", "Divisibility"),
        ("halved Foster", "6,4,2,1;1,1,4,6", 45, 4, 3, "no", "Divisibility"),
        ("L(IG(13,4,1))", "6,3,3;1,1,2", 52, 3, 3, "no", "Divisibility", "IG(13,4,1)"),
        # tabulated with d = 4; the array has diameter 3
        ("GH(2,2) Graph 1", "6,4,4;1,1,3", 63, 3, 3, "yes", "Search"),
        ("GH(2,2) Graph 2", "6,4,4;1,1,3", 63, 3, 3, "no", "Search"),
        ("L(IG(GQ(3,3)))", "6,3,3,3;1,1,1,2", 160, 4, 3, "no", "LineGraphGQ", "IG(GQ(3,3))"),
        ("L(IG(GH(3,3)))", "6,3,3,3,3,3;1,1,1,1,1,2", 1456, 6, 3, "no", "LineGraphGH", "IG(GH(3,3))"),
        ("K_8", "7;1", 8, 1, 3, "yes", "CompleteGraph"),
        ("Klein", "7,4,1;1,2,7", 24, 3, 3, "yes", "AntipodalD3"),
    ],
}

DESK_INFEASIBLE = {"L(IG(GH(3,3)))"}


def _make_entries() -> dict[str, CatalogEntry]:
    out = {}
    for table, rows_ in _TABLES.items():
        for row in rows_:
            name, arr, n, d, g, verdict, reason, *base = row
            out[name] = CatalogEntry(
                name=name, array=IntersectionArray.parse(arr), n=n, d=d, g=g,
                expected_verdict=verdict, expected_reason=reason, table=table,
                has_builder=name in BUILDERS, line_graph_base=base[0] if base else None,
                desk_infeasible=name in DESK_INFEASIBLE,
            )
    return out


ENTRIES = _make_entries()


def resolve(name: str) -> str:
    name = name.strip()
    return ALIASES.get(name, name)


def entry(name: str) -> CatalogEntry:
    key = resolve(name)
    if key not in ENTRIES:
        raise CatalogError(f"unknown catalog entry {name!r}")
    return ENTRIES[key]


def all_rows() -> list[CatalogEntry]:
    return [ENTRIES[row[0]] for t in sorted(_TABLES) for row in _TABLES[t]]


def rows(valency: int | str | None = None, table: int | None = None) -> list[CatalogEntry]:
    """Rows of one table, selected by table number or by valency.

    Valency 3, 4, 5 select tables 1-3; 6 and 7 select the corresponding rows of
    table 4; "67" selects all of table 4.
    """
    if table is not None:
        if table not in _TABLES:
            raise ValueError(f"unknown table {table}")
        return [ENTRIES[row[0]] for row in _TABLES[table]]
    key = str(valency)
    if key in ("3", "4", "5"):
        return rows(table=int(key) - 2)
    if key == "67":
        return rows(table=4)
    if key in ("6", "7"):
        return [e for e in rows(table=4) if e.k == int(key)]
    raise ValueError(f"unsupported valency {valency!r}")


def find_by_array(array: IntersectionArray) -> list[CatalogEntry]:
    return [e for e in all_rows() if e.array == array]


# ------------------------------------------------------------ build + verify

_FAMILIES = [
    (r"K_(\d+)", lambda m: (complete(int(m[1])), complete_array(int(m[1])))),
    (r"C_(\d+)", lambda m: (cycle(int(m[1])), cycle_array(int(m[1])))),
    (r"K\*_\{(\d+),\1\}", lambda m: (complete_bipartite_minus_matching(int(m[1])),
                                      bipartite_double_minus_matching_array(int(m[1])))),
    (r"Q_(\d+)", lambda m: (hypercube(int(m[1])), hypercube_array(int(m[1])))),
    (r"O_(\d+)", lambda m: (odd(int(m[1])), odd_array(int(m[1])))),
    (r"DO_(\d+)", lambda m: (doubled_odd(int(m[1])), doubled_odd_array(int(m[1])))),
    (r"T\((\d+)\)", lambda m: (triangular(int(m[1])),
                                IntersectionArray((2 * int(m[1]) - 4, int(m[1]) - 3), (1, 4)))),
]


def check_graph(g: Graph, array: IntersectionArray, n=None, d=None, girth=None, name="graph"):
    """Raise VerificationError unless g is distance-regular with ``array``."""
    if n is not None and g.n != n:
        raise VerificationError(f"{name}: expected {n} vertices, built {g.n}")
    if not is_connected(g):
        raise VerificationError(f"{name}: disconnected ({len(components(g))} components)")
    got = verify_intersection_array(g)
    if got != array:
        if got is None:
            raise VerificationError(f"{name}: not distance-regular (expected {array})")
        for i in range(max(got.d, array.d)):
            pair = (got.b_at(i), got.c_at(i + 1)) if i < got.d else None
            want = (array.b_at(i), array.c_at(i + 1)) if i < array.d else None
            if pair != want:
                raise VerificationError(f"{name}: first violation at i={i}: (b_i, c_i+1) = {pair}, expected {want}")
    if d is not None and g.distances.diameter != d:
        raise VerificationError(f"{name}: diameter {g.distances.diameter}, expected {d}")
    if girth is not None and g.distances.girth != girth:
        raise VerificationError(f"{name}: girth {g.distances.girth}, expected {girth}")


def build(name: str) -> Graph:
    """Construct a named graph and verify it against its intersection array.

    Results are cached per resolved name, so aliases share one instance.
    """
    return _build(resolve(name))


@lru_cache(maxsize=None)
def _build(key: str) -> Graph:
    if key in ENTRIES:
        e = ENTRIES[key]
        if not e.has_builder:
            raise CatalogError(f"{e.name} is registered without a builder")
        g = BUILDERS[key]()
        check_graph(g, e.array, e.n, e.d, e.g, e.name)
        return g
    if key in EXTRA_BUILDERS:
        text, fn = EXTRA_BUILDERS[key]
        array = IntersectionArray.parse(text)
        g = fn()
        check_graph(g, array, k_sequence(array).n, array.d, None, key)
        return g
    for pattern, make in _FAMILIES:
        m = re.fullmatch(pattern, key)
        if m:
            g, array = make(m)
            check_graph(g, array, k_sequence(array).n, array.d, None, key)
            return g
    raise CatalogError(f"unknown graph {key!r}")


def builder_names() -> list[str]:
    return list(BUILDERS) + list(EXTRA_BUILDERS)


def catalog_json() -> list[dict]:
    return [e.to_dict() for e in all_rows()]
