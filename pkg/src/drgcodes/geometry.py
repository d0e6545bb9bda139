"""Point-line geometries over small finite fields and their graphs.

Point order everywhere is lexicographic on normalised homogeneous coordinates
(first nonzero coordinate equal to 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .graph import Graph


class GeometryError(ValueError):
    pass


# q = p^2 is built as F_p[x]/(x^2 - r x - s); coefficients (r, s) of an irreducible quadratic
_QUADRATIC = {4: (2, 1, 1), 9: (3, 0, 2)}


class FiniteField:
    """GF(q) for q prime (up to 13) or q in {4, 9}; elements are ``0..q-1``.

    For q = p^2 the element ``a + p*b`` stands for a + b*x, where x is a root
    of x^2 + x + 1 (q = 4) or x^2 + 1 (q = 9).
    """

    def __init__(self, q: int):
        if q in _QUADRATIC:
            p, r, s = _QUADRATIC[q]
            self.add = [[_poly_add(a, b, p) for b in range(q)] for a in range(q)]
            self.mul = [[_poly_mul(a, b, p, r, s) for b in range(q)] for a in range(q)]
        elif q in (2, 3, 5, 7, 11, 13):
            self.add = [[(a + b) % q for b in range(q)] for a in range(q)]
            self.mul = [[a * b % q for b in range(q)] for a in range(q)]
        else:
            raise GeometryError(f"unsupported field order {q}")
        self.q = q
        self.neg = [self.add[a].index(0) for a in range(q)]
        self.inv = [None] + [self.mul[a].index(1) for a in range(1, q)]

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def dot(self, x, y) -> int:
        s = 0
        for a, b in zip(x, y):
            s = self.add[s][self.mul[a][b]]
        return s

    def scale(self, s: int, x) -> tuple[int, ...]:
        return tuple(self.mul[s][a] for a in x)

    def combine(self, s: int, x, t: int, y) -> tuple[int, ...]:
        return tuple(self.add[self.mul[s][a]][self.mul[t][b]] for a, b in zip(x, y))

    def normalize(self, x) -> tuple[int, ...]:
        for a in x:
            if a:
                return self.scale(self.inv[a], x)
        raise GeometryError("zero vector has no projective point")

    def projective_points(self, dim: int) -> list[tuple[int, ...]]:
        """Normalised points of PG(dim - 1, q) in lexicographic order."""
        out = []
        for v in itertools.product(range(self.q), repeat=dim):
            for a in v:
                if a:
                    if a == 1:
                        out.append(v)
                    break
        return out

    def span_points(self, x, y) -> frozenset[tuple[int, ...]]:
        """All projective points on the line through points x and y."""
        pts = {self.normalize(x)}
        for s in range(self.q):
            pts.add(self.normalize(self.combine(s, x, 1, y)))
        return frozenset(pts)


def _poly_add(a: int, b: int, p: int) -> int:
    return (a % p + b % p) % p + p * ((a // p + b // p) % p)


def _poly_mul(a: int, b: int, p: int, r: int, s: int) -> int:
    a0, a1, b0, b1 = a % p, a // p, b % p, b // p
    # x^2 = r x + s
    c0 = a0 * b0 + a1 * b1 * s
    c1 = a0 * b1 + a1 * b0 + a1 * b1 * r
    return c0 % p + p * (c1 % p)


@lru_cache(maxsize=None)
def field(q: int) -> FiniteField:
    return FiniteField(q)


@dataclass(frozen=True)
class Geometry:
    points: tuple[str, ...]
    lines: tuple[tuple[int, ...], ...]
    order: tuple[int, int]
    name: str = ""

    def __post_init__(self):
        s, t = self.order
        npts = len(self.points)
        on = [0] * npts
        for j, line in enumerate(self.lines):
            if len(line) != s + 1 or len(set(line)) != len(line):
                raise GeometryError(f"line {j} has {len(line)} points, expected {s + 1}")
            for p in line:
                if not 0 <= p < npts:
                    raise GeometryError(f"line {j} references unknown point {p}")
                on[p] += 1
        if any(x != t + 1 for x in on):
            raise GeometryError(f"some point is not on {t + 1} lines")
        seen = set()
        for line in self.lines:
            for pair in itertools.combinations(sorted(line), 2):
                if pair in seen:
                    raise GeometryError(f"points {pair} share two lines")
                seen.add(pair)

    @property
    def flags(self) -> list[tuple[int, int]]:
        """Incident (point, line) pairs, ordered by point then line."""
        return sorted((p, j) for j, line in enumerate(self.lines) for p in line)

    def to_json(self) -> dict:
        return {"points": list(self.points), "lines": [list(l) for l in self.lines],
                "order": list(self.order)}


def _geometry_from_point_sets(name, coords, line_sets, order, label_prefix="") -> Geometry:
    index = {p: i for i, p in enumerate(coords)}
    lines = sorted(tuple(sorted(index[p] for p in ls)) for ls in line_sets)
    labels = tuple(label_prefix + "(" + ",".join(map(str, p)) + ")" for p in coords)
    return Geometry(labels, tuple(lines), order, name)


def projective_plane(q: int) -> Geometry:
    """PG(2, q); lines are ordered by their sorted point tuples."""
    if q not in (2, 3, 4):
        raise GeometryError(f"projective plane of order {q} not supported")
    F = field(q)
    pts = F.projective_points(3)
    lines = [frozenset(p for p in pts if F.dot(p, u) == 0) for u in pts]
    return _geometry_from_point_sets(f"PG(2,{q})", pts, lines, (q, q))


def symplectic_gq(q: int) -> Geometry:
    """W(q): totally isotropic lines of x0y1 - x1y0 + x2y3 - x3y2 on PG(3, q)."""
    if q not in (2, 3, 4):
        raise GeometryError(f"W({q}) not supported")
    F = field(q)
    pts = F.projective_points(4)

    def form(x, y):
        t1 = F.sub(F.mul[x[0]][y[1]], F.mul[x[1]][y[0]])
        t2 = F.sub(F.mul[x[2]][y[3]], F.mul[x[3]][y[2]])
        return F.add[t1][t2]

    lines = set()
    for x, y in itertools.combinations(pts, 2):
        if form(x, y) == 0:
            lines.add(F.span_points(x, y))
    return _geometry_from_point_sets(f"W({q})", pts, lines, (q, q))


def split_cayley_hexagon(q: int) -> Geometry:
    """H(q): points of the parabolic quadric X0X4 + X1X5 + X2X6 = X3^2 in PG(6, q);
    lines are the quadric lines whose Grassmann coordinates p_ij = x_i y_j - x_j y_i
    satisfy p12=p34, p54=p32, p20=p35, p65=p30, p01=p36, p46=p31."""
    if q not in (2, 3):
        raise GeometryError(f"split Cayley hexagon of order {q} not supported")
    F = field(q)

    def quad(x):
        s = F.add[F.add[F.mul[x[0]][x[4]]][F.mul[x[1]][x[5]]]][F.mul[x[2]][x[6]]]
        return F.sub(s, F.mul[x[3]][x[3]])

    pts = [p for p in F.projective_points(7) if quad(p) == 0]
    on_quadric = set(pts)
    conditions = [((1, 2), (3, 4)), ((5, 4), (3, 2)), ((2, 0), (3, 5)),
                  ((6, 5), (3, 0)), ((0, 1), (3, 6)), ((4, 6), (3, 1))]
    lines = set()
    for x, y in itertools.combinations(pts, 2):
        def p(i, j):
            return F.sub(F.mul[x[i]][y[j]], F.mul[x[j]][y[i]])
        if all(p(*lhs) == p(*rhs) for lhs, rhs in conditions):
            span = F.span_points(x, y)
            if span <= on_quadric:
                lines.add(span)
    return _geometry_from_point_sets(f"H({q})", pts, lines, (q, q))


def double_geometry(plane: Geometry) -> Geometry:
    """Points are the points then the lines of ``plane``; lines are its flags."""
    npts = len(plane.points)
    covered = set()
    for line in plane.lines:
        covered.update(itertools.combinations(sorted(line), 2))
    if len(covered) != npts * (npts - 1) // 2:
        raise GeometryError("input is not a linear space")
    labels = tuple(plane.points) + tuple(f"L{j}" for j in range(len(plane.lines)))
    lines = tuple((p, npts + j) for p, j in plane.flags)
    t = plane.order[1]
    return Geometry(labels, lines, (1, t), f"double({plane.name})")


def dual(geom: Geometry) -> Geometry:
    on = [[] for _ in geom.points]
    for j, line in enumerate(geom.lines):
        for p in line:
            on[p].append(j)
    labels = tuple("[" + ",".join(geom.points[p] for p in line) + "]" for line in geom.lines)
    s, t = geom.order
    name = geom.name[5:-1] if geom.name.startswith("dual(") else f"dual({geom.name})"
    return Geometry(labels, tuple(tuple(x) for x in on), (t, s), name)


def gq22_duad_syntheme() -> Geometry:
    """GQ(2,2): points are 2-subsets of {1..6}, lines the 15 perfect matchings of K_6."""
    duads = list(itertools.combinations(range(1, 7), 2))
    index = {d: i for i, d in enumerate(duads)}
    synthemes = []
    for a, b, c in itertools.combinations(duads, 3):
        if len(set(a + b + c)) == 6:
            synthemes.append(tuple(sorted((index[a], index[b], index[c]))))
    labels = tuple(f"{{{a},{b}}}" for a, b in duads)
    return Geometry(labels, tuple(sorted(synthemes)), (2, 2), "GQ(2,2) duads/synthemes")


def incidence_graph(geom: Geometry) -> Graph:
    """Bipartite graph: points ``0..P-1`` followed by lines ``P..P+L-1``."""
    npts = len(geom.points)
    edges = [(p, npts + j) for j, line in enumerate(geom.lines) for p in line]
    labels = tuple(f"p{x}" for x in geom.points) + tuple(
        "L{" + ",".join(str(p) for p in line) + "}" for line in geom.lines
    )
    return Graph.from_edges(npts + len(geom.lines), edges, labels)


def point_graph(geom: Geometry) -> Graph:
    edges = set()
    for line in geom.lines:
        edges.update(itertools.combinations(sorted(line), 2))
    return Graph.from_edges(len(geom.points), sorted(edges), geom.points)


GEOMETRY_TYPES = {"pp": projective_plane, "gq": symplectic_gq, "gh": split_cayley_hexagon}
