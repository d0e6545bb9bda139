"""Intersection arrays: parameter arithmetic, exact spectral tests, classification."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .graph import Graph, _level_counts


class MalformedArrayError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]  # b_0 .. b_{d-1}
    c: tuple[int, ...]  # c_1 .. c_d

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        b, c = self.b, self.c
        if not b or len(b) != len(c):
            raise MalformedArrayError(f"b and c must be non-empty and of equal length: {self}")
        if any(x < 1 for x in b) or any(x < 1 for x in c):
            raise MalformedArrayError(f"entries must be positive: {self}")
        if c[0] != 1:
            raise MalformedArrayError(f"c_1 must be 1: {self}")
        if any(x < 0 for x in self.a):
            raise MalformedArrayError(f"negative a_i: {self}")
        if any(b[i] < b[i + 1] for i in range(len(b) - 1)) or any(
            c[i] > c[i + 1] for i in range(len(c) - 1)
        ):
            raise MalformedArrayError(f"b must be non-increasing and c non-decreasing: {self}")

    @classmethod
    def parse(cls, text: str) -> IntersectionArray:
        """Parse ``"4,3,3;1,1,2"`` (braces and spaces optional)."""
        body = text.strip().strip("{}")
        m = re.fullmatch(r"\s*([\d,\s]+);([\d,\s]+)\s*", body)
        if not m:
            raise MalformedArrayError(f"cannot parse intersection array {text!r}")
        b, c = ([int(x) for x in part.split(",") if x.strip()] for part in m.groups())
        return cls(tuple(b), tuple(c))

    def __str__(self):
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    @property
    def k(self) -> int:
        return self.b[0]

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def a(self) -> tuple[int, ...]:
        """a_0 .. a_d."""
        bb = self.b + (0,)
        cc = (0,) + self.c
        return tuple(self.k - bb[i] - cc[i] for i in range(self.d + 1))

    def b_at(self, i: int) -> int:
        return self.b[i] if i < self.d else 0

    def c_at(self, i: int) -> int:
        return self.c[i - 1] if i >= 1 else 0

    def to_list(self) -> list[list[int]]:
        return [list(self.b), list(self.c)]


@dataclass(frozen=True)
class KSequence:
    K: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.K)


@dataclass(frozen=True)
class SRGParams:
    n: int
    k: int
    lam: int
    mu: int

    def __post_init__(self):
        if self.k * (self.k - self.lam - 1) != (self.n - self.k - 1) * self.mu:
            raise MalformedArrayError(f"infeasible strongly regular parameters {self}")


def k_sequence(a: IntersectionArray) -> KSequence:
    K = [1]
    for i in range(a.d):
        num = K[-1] * a.b[i]
        if num % a.c[i]:
            raise MalformedArrayError(f"K_{i + 1} = {Fraction(num, a.c[i])} is not an integer for {a}")
        K.append(num // a.c[i])
    return KSequence(tuple(K))


def verify_intersection_array(g: Graph) -> IntersectionArray | None:
    """The intersection array of ``g`` if it is distance-regular, else None."""
    dist = g.distances.dist
    d = int(dist.max())
    if d == 0:
        return None
    below = _level_counts(g, dist, -1)
    above = _level_counts(g, dist, +1)
    b, c = [], []
    for i in range(d + 1):
        mask = dist == i
        cs = np.unique(below[mask])
        bs = np.unique(above[mask])
        if len(cs) != 1 or len(bs) != 1:
            return None
        if i < d:
            b.append(int(bs[0]))
        if i > 0:
            c.append(int(cs[0]))
    try:
        return IntersectionArray(tuple(b), tuple(c))
    except MalformedArrayError:
        return None


# ------------------------------------------------------------ exact arithmetic

@dataclass(frozen=True)
class Surd:
    """``x + y*sqrt(m)`` with rational x, y: arithmetic in Q[t]/(t^2 - m)."""

    x: Fraction
    y: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def sqrt(cls, m: int) -> Surd:
        return cls(Fraction(0), Fraction(1), m)

    def _lift(self, other) -> Surd:
        if isinstance(other, Surd):
            if other.m != self.m:
                raise ValueError("surds over different radicands")
            return other
        return Surd(Fraction(other), Fraction(0), self.m)

    def __add__(self, other):
        o = self._lift(other)
        return Surd(self.x + o.x, self.y + o.y, self.m)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.x, -self.y, self.m)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Surd(self.x * o.x + self.m * self.y * o.y, self.x * o.y + self.y * o.x, self.m)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y, self.m))

    def __bool__(self):
        return bool(self.x or self.y)

    def __str__(self):
        return f"{self.x} + {self.y}*sqrt({self.m})"


Scalar = Union[int, Fraction, Surd]


def charpoly_eval(a: IntersectionArray, x: Scalar) -> Scalar:
    """det(L - xI) for the tridiagonal intersection matrix L of ``a``.

    Python integers and fractions are unbounded, so the recurrence never wraps.
    """
    if not isinstance(x, Surd):
        x = Fraction(x)
    ai = a.a
    prev, cur = 1, ai[0] - x
    for i in range(1, a.d + 1):
        prev, cur = cur, (ai[i] - x) * cur - a.b[i - 1] * a.c[i - 1] * prev
    return cur


def has_eigenvalue(a: IntersectionArray, x: Scalar) -> bool:
    return charpoly_eval(a, x) == 0


def second_largest_eigenvalue_sq_bipartite_d4(a: IntersectionArray) -> int:
    """Square of the second largest eigenvalue of a bipartite diameter-4 array."""
    if a.d != 4 or any(a.a):
        raise ValueError(f"{a} is not a bipartite array of diameter 4")
    c2, c3 = a.c[1], a.c[2]
    return (c2 + 1) * a.k - c2 * (c3 + 1)


@dataclass(frozen=True)
class Classification:
    bipartite: bool
    antipodal: bool
    fiber_size: int | None
    primitive: bool


def classify(a: IntersectionArray) -> Classification:
    d = a.d
    bipartite = not any(a.a)
    antipodal = d >= 2 and all(a.b[i] == a.c[d - i - 1] for i in range(d) if i != d // 2)
    fiber = 1 + k_sequence(a).K[d] if antipodal else None
    return Classification(bipartite, antipodal, fiber, not (bipartite or antipodal))


def srg_params(a: IntersectionArray) -> SRGParams:
    if a.d != 2:
        raise ValueError(f"{a} has diameter {a.d}, not 2")
    return SRGParams(k_sequence(a).n, a.k, a.a[1], a.c[1])


def srg_params_of(g: Graph) -> SRGParams | None:
    """Parameters of ``g`` if it is strongly regular (regular, non-complete, and
    lambda/mu constant); connectivity is not required."""
    k = g.valency
    if k is None or k in (0, g.n - 1):
        return None
    lam, mu = set(), set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            common = (g.rows[u] & g.rows[v]).bit_count()
            (lam if g.rows[u] >> v & 1 else mu).add(common)
    if len(lam) > 1 or len(mu) != 1:
        return None
    return SRGParams(g.n, k, lam.pop() if lam else 0, mu.pop())


# --------------------------------------------------------- array families

def complete_array(n: int) -> IntersectionArray:
    return IntersectionArray((n - 1,), (1,))


def cycle_array(n: int) -> IntersectionArray:
    d = n // 2
    if n % 2 == 0:
        return IntersectionArray((2,) + (1,) * (d - 1), (1,) * (d - 1) + (2,))
    return IntersectionArray((2,) + (1,) * (d - 1), (1,) * d)


def odd_array(n: int) -> IntersectionArray:
    """Odd graph O_n: valency n, diameter n - 1."""
    return IntersectionArray(
        tuple(n - (i + 1) // 2 for i in range(n - 1)), tuple((i + 1) // 2 for i in range(1, n))
    )


def doubled_odd_array(n: int) -> IntersectionArray:
    """Doubled odd graph DO_n: valency n, diameter 2n - 1."""
    d = 2 * n - 1
    return IntersectionArray(
        tuple(n - (i + 1) // 2 for i in range(d)), tuple((i + 1) // 2 for i in range(1, d)) + (n,)
    )


def doubled_odd_parameter(a: IntersectionArray) -> int | None:
    """n such that ``a`` is the array of DO_n, else None."""
    n = a.k
    if n >= 2 and a.d == 2 * n - 1 and a == doubled_odd_array(n):
        return n
    return None


def hypercube_array(n: int) -> IntersectionArray:
    return IntersectionArray(tuple(range(n, 0, -1)), tuple(range(1, n + 1)))


def bipartite_double_minus_matching_array(n: int) -> IntersectionArray:
    """K_{n,n} minus a perfect matching."""
    return IntersectionArray((n - 1, n - 2, 1), (1, n - 2, n - 1))
