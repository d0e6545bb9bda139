"""Perfect 1-codes: verification, classification and exhaustive search.

A perfect 1-code is an exact cover of the vertex set by closed neighbourhoods,
so the main search is an exact-cover backtracking over bitsets. Diameter-3
hosts can alternatively be searched as cliques of the distance-3 graph.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, GraphError, bits, distance_i_graph, folded_graph, mask_of

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class Code:
    vertices: tuple[int, ...]
    host: Graph = field(repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(sorted(self.vertices))
        if len(set(vs)) != len(vs):
            raise CodeError("code vertices must be distinct")
        if vs and (vs[0] < 0 or vs[-1] >= self.host.n):
            raise CodeError(f"code vertex out of range 0..{self.host.n - 1}")
        object.__setattr__(self, "vertices", vs)

    def __len__(self):
        return len(self.vertices)


def _closed(g: Graph) -> list[int]:
    return [r | (1 << v) for v, r in enumerate(g.rows)]


def _as_vertices(g: Graph, code) -> tuple[int, ...]:
    if isinstance(code, Code):
        return code.vertices
    return Code(tuple(code), g).vertices


def verify_perfect_1(g: Graph, code) -> bool:
    """True iff the closed neighbourhoods of the code partition V(g)."""
    vs = _as_vertices(g, code)
    closed = _closed(g)
    covered = 0
    for v in vs:
        if covered & closed[v]:
            return False
        covered |= closed[v]
    return covered == (1 << g.n) - 1


@dataclass
class CodeReport:
    size: int
    is_independent: bool
    is_perfect_1: bool
    min_distance: int | None  # None for one-element codes
    covering_radius: int
    completely_regular: bool
    outer_distribution: list[tuple[int, int, int]] | None  # (c_l, a_l, b_l) per level
    violation: dict | None = None

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "is_independent": self.is_independent,
            "is_perfect_1": self.is_perfect_1,
            "min_distance": self.min_distance,
            "covering_radius": self.covering_radius,
            "completely_regular": self.completely_regular,
            "outer_distribution": [list(x) for x in self.outer_distribution]
            if self.outer_distribution is not None else None,
            "violation": self.violation,
        }


def classify_code(g: Graph, code) -> CodeReport:
    vs = _as_vertices(g, code)
    if not vs:
        raise CodeError("empty code")
    dist = g.distances.dist
    level = dist[list(vs)].min(axis=0)
    t = int(level.max())
    min_d = None
    if len(vs) > 1:
        sub = dist[list(vs)][:, list(vs)]
        min_d = int(sub[~np.eye(len(vs), dtype=bool)].min())
    cm = mask_of(vs)
    independent = all(not (g.rows[v] & cm) for v in vs)

    distribution = []
    violation = None
    levels = [mask_of(np.flatnonzero(level == l).tolist()) for l in range(t + 1)] + [0]
    for l in range(t + 1):
        below = levels[l - 1] if l > 0 else 0
        expected = None
        for v in bits(levels[l]):
            row = g.rows[v]
            counts = ((row & below).bit_count(), (row & levels[l]).bit_count(),
                      (row & levels[l + 1]).bit_count())
            if expected is None:
                expected = counts
            elif counts != expected:
                violation = {"level": l, "vertex": v, "counts": list(counts), "expected": list(expected)}
                break
        if violation:
            break
        distribution.append(expected)
    regular = violation is None
    return CodeReport(
        size=len(vs),
        is_independent=independent,
        is_perfect_1=verify_perfect_1(g, vs),
        min_distance=min_d,
        covering_radius=t,
        completely_regular=regular,
        outer_distribution=distribution if regular else None,
        violation=violation,
    )


# ------------------------------------------------------------------ results

@dataclass
class SearchResult:
    status: str  # "yes" | "no" | "unknown"
    witness: tuple[int, ...] | None
    nodes: int
    method: str
    checkpoint: dict | None = None
    note: str = ""

    def to_dict(self) -> dict:
        out = {"status": self.status, "witness": list(self.witness) if self.witness else None,
               "nodes": self.nodes, "method": self.method}
        if self.note:
            out["note"] = self.note
        return out


def graph_fingerprint(g: Graph) -> str:
    h = hashlib.sha256(str(g.n).encode())
    for r in g.rows:
        h.update(r.to_bytes((g.n + 7) // 8 or 1, "little"))
    return h.hexdigest()[:16]


class BudgetExhausted(Exception):
    pass


# ------------------------------------------------------------ exact cover

class ExactCoverSearch:
    """Depth-first exact cover of V(g) by closed neighbourhoods.

    Branches on the uncovered vertex with the fewest remaining candidate
    neighbourhoods (ties: lowest index); candidates are tried in increasing
    order. The explicit stack makes the search resumable: a checkpoint is the
    list of next-candidate indices, one per depth.
    """

    def __init__(self, g: Graph, forbidden: int = 0, required: Sequence[int] = ()):
        self.g = g
        self.full = (1 << g.n) - 1
        self.closed = _closed(g)
        self.forbidden = forbidden
        self.required = tuple(required)
        self.nodes = 0
        self.stack: list[list] = []  # [covered, code, cands, next_index]
        self._started = False

    def _frame(self, covered: int, code: int):
        best = None
        free = self.full & ~covered
        while free:
            low = free & -free
            u = low.bit_length() - 1
            free ^= low
            cands = [v for v in bits(self.closed[u] & ~self.forbidden) if not self.closed[v] & covered]
            if best is None or len(cands) < len(best[2]):
                best = [covered, code, cands, 0]
                if len(cands) <= 1:
                    break
        return best

    def _root(self):
        covered = code = 0
        for v in self.required:
            if covered & self.closed[v] or self.forbidden >> v & 1:
                return None, None
            covered |= self.closed[v]
            code |= 1 << v
        return covered, code

    def start(self) -> int | None:
        """Initialise the stack; returns a code mask if the required set already covers."""
        self._started = True
        covered, code = self._root()
        if covered is None:
            return None
        if covered == self.full:
            return code
        fr = self._frame(covered, code)
        if fr and fr[2]:
            self.stack = [fr]
        return None

    def run(self, budget: int | None = None) -> int | None:
        """Advance to the next solution (code mask) or exhaustion (None).

        Raises BudgetExhausted once ``budget`` more nodes have been expanded.
        """
        if not self._started:
            done = self.start()
            if done is not None:
                return done
        limit = None if budget is None else self.nodes + budget
        stack = self.stack
        while stack:
            fr = stack[-1]
            covered, code, cands, i = fr
            if i == len(cands):
                stack.pop()
                continue
            if limit is not None and self.nodes >= limit:
                raise BudgetExhausted
            v = cands[i]
            fr[3] = i + 1
            self.nodes += 1
            cov = covered | self.closed[v]
            cm = code | (1 << v)
            if cov == self.full:
                return cm
            child = self._frame(cov, cm)
            if child and child[2]:
                stack.append(child)
        return None

    def checkpoint(self) -> dict:
        return {"version": CHECKPOINT_VERSION, "n": self.g.n,
                "fingerprint": graph_fingerprint(self.g), "forbidden": self.forbidden,
                "required": list(self.required), "nodes": self.nodes,
                "path": [fr[3] for fr in self.stack]}

    @classmethod
    def resume(cls, g: Graph, state: dict) -> ExactCoverSearch:
        if state.get("version") != CHECKPOINT_VERSION:
            raise CodeError(f"unsupported checkpoint version {state.get('version')}")
        if state["n"] != g.n or state["fingerprint"] != graph_fingerprint(g):
            raise CodeError("checkpoint belongs to a different graph")
        s = cls(g, state["forbidden"], state["required"])
        s._started = True
        s.nodes = state["nodes"]
        path = state["path"]
        if not path:
            return s  # exhausted search
        covered, code = s._root()
        fr = s._frame(covered, code)
        s.stack = [fr]
        for idx in path[:-1]:
            fr[3] = idx
            v = fr[2][idx - 1]
            fr = s._frame(fr[0] | s.closed[v], fr[1] | (1 << v))
            s.stack.append(fr)
        fr[3] = path[-1]
        return s


def _regular_size(g: Graph) -> int | None:
    k = g.valency
    if k is None:
        raise GraphError("perfect code search needs a regular graph")
    return g.n // (k + 1) if g.n % (k + 1) == 0 else None


def _exists(g: Graph, required=(), forbidden=0, budget=None) -> tuple[int | None, int]:
    s = ExactCoverSearch(g, forbidden, required)
    return s.run(budget), s.nodes


def _branch_task(args):
    g, v, budget = args
    try:
        found, nodes = _exists(g, required=(v,), budget=budget)
        return found, nodes, False
    except BudgetExhausted:
        return None, budget, True


def search_perfect_1(g: Graph, mode: str = "existence", budget: int | None = None,
                     workers: int = 1) -> SearchResult:
    """Exact-cover search for a perfect 1-code.

    ``mode="canonical"`` returns the lexicographically smallest code (as a
    sorted tuple); ``budget`` caps expanded nodes; ``workers > 1`` splits the
    root branches across processes (existence mode only).
    """
    if mode not in ("existence", "canonical"):
        raise ValueError(f"unknown mode {mode!r}")
    size = _regular_size(g)
    if size is None:
        return SearchResult("no", None, 0, "exact-cover", note="(k+1) does not divide n")
    if mode == "canonical":
        return _canonical(g, budget)
    if workers > 1:
        return _parallel(g, budget, workers)
    s = ExactCoverSearch(g)
    try:
        found = s.run(budget)
    except BudgetExhausted:
        return SearchResult("unknown", None, s.nodes, "exact-cover", s.checkpoint(), "budget exhausted")
    if found is None:
        return SearchResult("no", None, s.nodes, "exact-cover")
    return SearchResult("yes", tuple(bits(found)), s.nodes, "exact-cover")


def _parallel(g: Graph, budget, workers) -> SearchResult:
    root = ExactCoverSearch(g)._frame(0, 0)
    tasks = [(g, v, budget) for v in root[2]]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_branch_task, tasks))
    nodes = sum(r[1] for r in results) + len(tasks)
    for found, _, _ in results:
        if found is not None:
            return SearchResult("yes", tuple(bits(found)), nodes, "exact-cover/parallel")
    if any(r[2] for r in results):
        return SearchResult("unknown", None, nodes, "exact-cover/parallel", note="budget exhausted")
    return SearchResult("no", None, nodes, "exact-cover/parallel")


def _canonical(g: Graph, budget) -> SearchResult:
    nodes = 0

    def exists(required, forbidden):
        nonlocal nodes
        left = None if budget is None else budget - nodes
        s = ExactCoverSearch(g, forbidden, required)
        try:
            return s.run(left)
        finally:
            nodes += s.nodes

    closed = _closed(g)
    try:
        if exists((), 0) is None:
            return SearchResult("no", None, nodes, "exact-cover/canonical")
        prefix: list[int] = []
        covered = 0
        full = (1 << g.n) - 1
        while covered != full:
            start = prefix[-1] + 1 if prefix else 0
            for x in range(start, g.n):
                if closed[x] & covered:
                    continue
                forbidden = ((1 << x) - 1) & ~mask_of(prefix)
                if exists(prefix + [x], forbidden) is not None:
                    prefix.append(x)
                    covered |= closed[x]
                    break
            else:
                raise AssertionError("canonical extension vanished")
    except BudgetExhausted:
        return SearchResult("unknown", None, nodes, "exact-cover/canonical", note="budget exhausted")
    return SearchResult("yes", tuple(prefix), nodes, "exact-cover/canonical")


def enumerate_perfect_codes(g: Graph, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every perfect 1-code of ``g``, each exactly once."""
    if g.valency is not None and g.n % (g.valency + 1):
        return
    s = ExactCoverSearch(g)
    count = 0
    while limit is None or count < limit:
        found = s.run()
        if found is None:
            return
        count += 1
        yield tuple(bits(found))


# ------------------------------------------------------------ cliques

def _colour_order(rows, P):
    order, colours = [], []
    colour = 0
    U = P
    while U:
        colour += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~rows[v] & ~low
            U &= ~low
            order.append(v)
            colours.append(colour)
    return order, colours


class CliqueSearch:
    """Branch and bound over bitset rows with greedy colouring bounds."""

    def __init__(self, rows: Sequence[int], budget: int | None = None):
        self.rows = rows
        self.budget = budget
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExhausted

    def cliques_of_size(self, size: int, P: int | None = None) -> Iterator[list[int]]:
        rows = self.rows
        if P is None:
            P = (1 << len(rows)) - 1

        def expand(current, P):
            order, colours = _colour_order(rows, P)
            for i in range(len(order) - 1, -1, -1):
                if len(current) + colours[i] < size:
                    return
                v = order[i]
                self._tick()
                current.append(v)
                if len(current) == size:
                    yield sorted(current)
                else:
                    newP = P & rows[v]
                    if newP:
                        yield from expand(current, newP)
                current.pop()
                P &= ~(1 << v)

        if size <= 0:
            yield []
            return
        yield from expand([], P)

    def maximum(self, stop_at: int | None = None) -> list[int]:
        """A maximum clique. The incumbent is kept in ``self.best`` so it survives
        BudgetExhausted."""
        rows = self.rows
        self.best = []

        def expand(current, P):
            order, colours = _colour_order(rows, P)
            for i in range(len(order) - 1, -1, -1):
                if len(current) + colours[i] <= len(self.best):
                    return
                v = order[i]
                self._tick()
                current.append(v)
                newP = P & rows[v]
                if newP:
                    expand(current, newP)
                elif len(current) > len(self.best):
                    self.best = sorted(current)
                current.pop()
                if stop_at is not None and len(self.best) >= stop_at:
                    return
                P &= ~(1 << v)

        expand([], (1 << len(rows)) - 1)
        return self.best

    def root_bound(self) -> int:
        _, colours = _colour_order(self.rows, (1 << len(self.rows)) - 1)
        return max(colours, default=0)


def search_via_distance3_clique(g: Graph, budget: int | None = None) -> SearchResult:
    """Perfect 1-codes of a diameter-3 graph as cliques of its distance-3 graph.

    Each clique of the right size is re-checked with verify_perfect_1.
    """
    if g.distances.diameter != 3:
        raise GraphError(f"clique method needs diameter 3, got {g.distances.diameter}")
    size = _regular_size(g)
    if size is None:
        return SearchResult("no", None, 0, "clique", note="(k+1) does not divide n")
    d3 = distance_i_graph(g, 3)
    cs = CliqueSearch(d3.rows, budget)
    try:
        for clique in cs.cliques_of_size(size):
            if verify_perfect_1(g, clique):
                return SearchResult("yes", tuple(clique), cs.nodes, "clique")
            log.info("clique %s is not a perfect code", clique)
    except BudgetExhausted:
        return SearchResult("unknown", None, cs.nodes, "clique", note="budget exhausted")
    return SearchResult("no", None, cs.nodes, "clique")


# --------------------------------------------------------- line graph codes

@dataclass
class EdgeCodeCheck:
    edges: list[tuple[int, int]]
    matching: bool
    induced_one_regular: bool
    vertex_cover: bool
    disjoint_closed_neighbourhoods: bool

    @property
    def valid(self) -> bool:
        return (self.matching and self.induced_one_regular and self.vertex_cover
                and self.disjoint_closed_neighbourhoods)


def _edge_closed_neighbourhoods(base: Graph, edges):
    index = {e: i for i, e in enumerate(base.edges())}
    incident = [0] * base.n
    for (u, v), i in index.items():
        incident[u] |= 1 << i
        incident[v] |= 1 << i
    return [incident[u] | incident[v] for u, v in edges]


def check_edge_code(base: Graph, edges: Sequence[tuple[int, int]]) -> EdgeCodeCheck:
    edges = [tuple(sorted(e)) for e in edges]
    for u, v in edges:
        if not base.has_edge(u, v):
            raise CodeError(f"({u},{v}) is not an edge of the base graph")
    ends = [x for e in edges for x in e]
    matching = len(set(ends)) == len(ends)
    covered = mask_of(ends)
    one_regular = matching and all((base.rows[x] & covered).bit_count() == 1 for x in ends)
    cover = bool(edges) and all(covered >> u & 1 or covered >> v & 1 for u, v in base.edges())
    nbhd = _edge_closed_neighbourhoods(base, edges)
    disjoint = True
    acc = 0
    for m in nbhd:
        if acc & m:
            disjoint = False
            break
        acc |= m
    return EdgeCodeCheck(edges, matching, one_regular, cover, disjoint)


def code_to_edge_set(lg: tuple[Graph, list[tuple[int, int]]], base: Graph, code) -> EdgeCodeCheck:
    """Map a code of L(base) to its base edges and check the edge-code conditions."""
    lgraph, emap = lg
    vs = _as_vertices(lgraph, code)
    if not vs:
        raise CodeError("empty code")
    if len(emap) != base.num_edges or emap != base.edges():
        raise CodeError("line graph was not built from this base graph")
    return check_edge_code(base, [emap[v] for v in vs])


def edge_set_to_code(lg: tuple[Graph, list[tuple[int, int]]], edges) -> tuple[int, ...]:
    _, emap = lg
    index = {e: i for i, e in enumerate(emap)}
    try:
        return tuple(sorted(index[tuple(sorted(e))] for e in edges))
    except KeyError as exc:
        raise CodeError(f"{exc.args[0]} is not an edge of the base graph") from None


def unused_lines_form_grid(npoints: int, lines: Sequence[Sequence[int]],
                           flags: Sequence[tuple[int, int]]) -> bool:
    """For a GQ(2,2) flag code: do the lines missed by the flags form a 3x3 grid
    on the flag points? (Each such line inside the flag points, each flag point
    on exactly two of them, and the lines split into two classes of disjoint lines.)

    Diagnostic only; the answer may depend on the witness.
    """
    pts = {p for p, _ in flags}
    used = {j for _, j in flags}
    unused = [set(lines[j]) for j in range(len(lines)) if j not in used]
    if any(not line <= pts for line in unused):
        return False
    if any(sum(p in line for line in unused) != 2 for p in pts):
        return False
    classes: list[list[set]] = []
    for line in unused:
        for cls in classes:
            if all(not line & other for other in cls):
                cls.append(line)
                break
        else:
            classes.append([line])
    return len(classes) == 2 and all(len(c) * len(next(iter(c))) == len(pts) for c in classes)


@dataclass
class PackingResult:
    value: int
    edges: list[tuple[int, int]]
    exact: bool
    upper: int
    nodes: int


def max_disjoint_closed_edge_neighborhoods(g: Graph, upper_bound_hint: int | None = None,
                                           budget: int | None = None,
                                           reading: str = "edge") -> PackingResult:
    """Largest set of edges whose closed edge neighbourhoods are pairwise disjoint.

    With ``reading="edge"`` the closed neighbourhood of uv is the set of edges
    meeting u or v (so the answer is an independent set in the square of the
    line graph). With ``reading="vertex"`` it is the vertex set N[u] | N[v],
    a strictly stronger separation.

    Solved as a maximum clique in the compatibility graph on edges. When
    ``upper_bound_hint`` is given the search stops as soon as it is reached.
    """
    edges = g.edges()
    if reading == "edge":
        nbhd = _edge_closed_neighbourhoods(g, edges)
    elif reading == "vertex":
        nbhd = [g.rows[u] | g.rows[v] | 1 << u | 1 << v for u, v in edges]
    else:
        raise ValueError(f"unknown reading {reading!r}")
    m = len(edges)
    compat = [mask_of(j for j in range(m) if j != i and not nbhd[i] & nbhd[j]) for i in range(m)]
    cs = CliqueSearch(compat, budget)
    upper = cs.root_bound()
    if upper_bound_hint is not None:
        upper = min(upper, upper_bound_hint)
    try:
        cs.maximum(stop_at=upper_bound_hint)
        exact = True
    except BudgetExhausted:
        exact = False
    best = cs.best
    if exact:
        upper = len(best)
    return PackingResult(len(best), [edges[i] for i in best], exact, upper, cs.nodes)


# ------------------------------------------------------------ antipodal lift

def antipodal_code_lift(g: Graph, fibers: Sequence[Sequence[int]], folded_code) -> Code:
    folded = folded_graph(g, fibers)
    fc = _as_vertices(folded, folded_code)
    if not verify_perfect_1(folded, fc):
        raise CodeError("folded code is not a perfect 1-code of the folded graph")
    code = Code(tuple(v for i in fc for v in fibers[i]), g)
    if not verify_perfect_1(g, code):
        raise CodeError("lifted code is not perfect")
    return code


# ------------------------------------------------------ extended refutation

def ghx33_nonexistence_search(lg: Graph, budget: int | None = None,
                              checkpoint: dict | None = None,
                              checkpoint_path: str | Path | None = None,
                              slice_nodes: int = 1_000_000) -> SearchResult:
    """Resumable exhaustive search for a perfect 1-code in L(IG(H(3))).

    Progress is written to ``checkpoint_path`` every ``slice_nodes`` nodes.
    """
    if lg.n != 1456 or lg.valency != 6:
        raise GraphError("expected the 6-regular line graph on 1456 vertices")
    target = lg.n // (lg.valency + 1)
    assert target == 208
    s = ExactCoverSearch.resume(lg, checkpoint) if checkpoint else ExactCoverSearch(lg)
    spent = 0
    while True:
        step = slice_nodes if budget is None else min(slice_nodes, budget - spent)
        if step <= 0:
            break
        before = s.nodes
        try:
            found = s.run(step)
        except BudgetExhausted:
            spent += s.nodes - before
            if checkpoint_path:
                Path(checkpoint_path).write_text(json.dumps(s.checkpoint()))
            log.info("ghx33 search: %d nodes, depth %d", s.nodes, len(s.stack))
            continue
        if checkpoint_path:
            Path(checkpoint_path).write_text(json.dumps(s.checkpoint()))
        if found is None:
            return SearchResult("no", None, s.nodes, "exact-cover/extended")
        return SearchResult("yes", tuple(bits(found)), s.nodes, "exact-cover/extended")
    return SearchResult("unknown", None, s.nodes, "exact-cover/extended", s.checkpoint(),
                        f"budget exhausted; target size {target}")
