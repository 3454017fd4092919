"""Reducing triples (V0, X, Y), the reduction step, and explicit configurations.

A triple is reducing when |X| <= 2|Y|, X meets every triangle through V0, and
every edge of a Y-triangle with both ends outside V0 lies in X.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Literal

from .graph import Edge, Graph, Triangle, complete_graph, edge, enumerate_triangles
from .mis import DEFAULT_BUDGET, BudgetExceeded
from .solvers import max_packing, min_hitting_edges

Condition = Literal["i", "ii", "iii"]


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReducingTriple:
    v0: frozenset[int]
    x: tuple[Edge, ...]
    y: tuple[Triangle, ...]

    @classmethod
    def of(cls, v0: Iterable[int], x: Iterable[tuple[int, int]], y: Iterable[Triangle | Iterable[int]]) -> ReducingTriple:
        return cls(
            frozenset(v0),
            tuple(sorted({edge(u, v) for u, v in x})),
            tuple(sorted({t if isinstance(t, Triangle) else Triangle.of(*t) for t in y})),
        )

    def to_json(self) -> dict:
        return {"v0": sorted(self.v0), "x": [list(e) for e in self.x], "y": [list(t.vertices) for t in self.y]}

    @classmethod
    def from_json(cls, data: dict | str) -> ReducingTriple:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.of(data["v0"], (tuple(e) for e in data["x"]), (tuple(t) for t in data["y"]))


@dataclass(frozen=True)
class TripleVerdict:
    valid: bool
    failed_condition: Condition | None
    detail: str = ""


def outside_edges(t: Triangle, v0: frozenset[int]) -> list[Edge]:
    """Edges of ``t`` with neither end in ``v0``."""
    return [e for e in t.edges if e[0] not in v0 and e[1] not in v0]


def _check_structure(g: Graph, t: ReducingTriple) -> None:
    if not t.v0:
        raise ReductionError("V0 must be nonempty")
    if any(not 0 <= v < g.n for v in t.v0):
        raise ReductionError("V0 names a vertex outside the graph")
    for e in t.x:
        if not g.has_edge(*e):
            raise ReductionError(f"X edge {e} is not in the graph")
    used: set[Edge] = set()
    for tri in t.y:
        for e in tri.edges:
            if not g.has_edge(*e):
                raise ReductionError(f"{tri.vertices} is not a triangle of the graph")
            if e in used:
                raise ReductionError(f"Y triangles share the edge {e}")
            used.add(e)


def verify_reducing_triple(g: Graph, t: ReducingTriple) -> TripleVerdict:
    """Check conditions (i), (ii), (iii) in order and report the first failure."""
    _check_structure(g, t)
    if len(t.x) > 2 * len(t.y):
        return TripleVerdict(False, "i", f"|X| = {len(t.x)} > 2|Y| = {2 * len(t.y)}")
    xs = set(t.x)
    for tri in enumerate_triangles(g):
        if t.v0.intersection(tri.vertices) and xs.isdisjoint(tri.edges):
            return TripleVerdict(False, "ii", f"triangle {tri.vertices} meets V0 but avoids X")
    for tri in t.y:
        for e in outside_edges(tri, t.v0):
            if e not in xs:
                return TripleVerdict(False, "iii", f"edge {e} of {tri.vertices} is outside V0 and not in X")
    return TripleVerdict(True, None)


def apply_reduction(g: Graph, t: ReducingTriple) -> Graph:
    """``G - X - V0``, relabelled to consecutive ids in the original order."""
    verdict = verify_reducing_triple(g, t)
    if not verdict.valid:
        raise ReductionError(f"not a reducing triple (condition {verdict.failed_condition}): {verdict.detail}")
    reduced, _ = g.remove_edges(t.x).remove_vertices(t.v0)
    return reduced


# -- explicit configurations --------------------------------------------------------------


def _tri(*vs: int) -> Triangle:
    return Triangle.of(*vs)


def _induced_edges(g: Graph, vs: Iterable[int]) -> list[Edge]:
    vs = sorted(set(vs))
    return [(a, b) for a, b in combinations(vs, 2) if g.has_edge(a, b)]


def construct_theorem35_config() -> tuple[Graph, ReducingTriple]:
    """``K7`` on ``v1..v7`` (ids 0..6) with three degree-5 vertices ``z1, z2, z3`` (ids 7, 8, 9)."""
    v = [None, 0, 1, 2, 3, 4, 5, 6]
    z1, z2, z3 = 7, 8, 9
    edges = list(complete_graph(7).edges)
    edges += [(z1, v[i]) for i in (1, 2, 3, 4, 5)]
    edges += [(z2, v[i]) for i in (3, 4, 5, 6, 7)]
    edges += [(z3, v[i]) for i in (1, 2, 3, 6, 7)]
    g = Graph(10, edges)
    y = [
        _tri(z1, v[1], v[4]), _tri(z1, v[2], v[5]), _tri(z2, v[3], v[4]),
        _tri(z2, v[5], v[6]), _tri(z3, v[1], v[6]), _tri(z3, v[2], v[3]),
        _tri(v[1], v[2], v[7]), _tri(v[2], v[4], v[6]), _tri(v[3], v[6], v[7]),
        _tri(v[4], v[5], v[7]), _tri(v[1], v[3], v[5]),
    ]
    return g, ReducingTriple.of({z1, z2, z3}, complete_graph(7).edges, y)


LEMMA34_CASES = ("a1", "a2", "a3", "b", "c1", "c2", "c3")

# two vertices x, y and up to seven neighbours v1..v7
_X, _Y = 0, 1


def _v(i: int) -> int:
    return i + 1


def _clique_minus(vs: Iterable[int], missing: Iterable[tuple[int, int]]) -> set[Edge]:
    gone = {edge(_v(a), _v(b)) for a, b in missing}
    return {edge(_v(a), _v(b)) for a, b in combinations(sorted(vs), 2)} - gone


def construct_lemma34_config(
    case: str,
    include_optional: bool = False,
    variant: str | int | None = None,
) -> tuple[Graph, ReducingTriple]:
    """Host graph and explicit reducing triple for one two-vertex configuration.

    Vertex ``x`` is 0, ``y`` is 1 and ``v_i`` is ``i + 1``. Edges that a case
    allows to be missing are left out unless ``include_optional``. ``variant``
    picks ``d(y)`` in case a2 (6 or 5) and the drawing in case a3 (``"c"``,
    where ``v7`` is one of the two possibly non-adjacent vertices, or ``"d"``).
    """
    x, y = _X, _Y
    v = _v

    def star(center: int, ids: Iterable[int]) -> set[Edge]:
        return {edge(center, v(i)) for i in ids}

    if case == "a1":
        hood = range(1, 7)
        optional = [(1, 4), (2, 5), (3, 6)]
        edges = _clique_minus(hood, [] if include_optional else optional)
        edges |= star(x, hood) | star(y, hood)
        g = Graph(8, edges)
        x_set = _induced_edges(g, [v(i) for i in hood])
        y_set = [(v(1), v(3), v(5)), (v(2), v(4), v(6)), (x, v(1), v(2)), (y, v(2), v(3)),
                 (x, v(3), v(4)), (y, v(4), v(5)), (x, v(5), v(6)), (y, v(1), v(6))]
    elif case == "a2":
        dy = 6 if variant is None else int(variant)
        if dy not in (5, 6):
            raise ReductionError("case a2 takes d(y) in {5, 6}")
        x_hood = range(1, 7)
        y_hood = range(2, 8) if dy == 6 else range(2, 7)
        edges = _clique_minus(x_hood, [] if include_optional else [(1, 4), (2, 5), (3, 6)])
        if dy == 6:
            edges |= {edge(v(7), v(i)) for i in (2, 3, 6)}
            if include_optional:
                edges |= {edge(v(7), v(4)), edge(v(7), v(5))}
        edges |= star(x, x_hood) | star(y, y_hood)
        g = Graph(9 if dy == 6 else 8, edges)
        x_set = [(x, v(1)), (v(1), v(2))] + _induced_edges(g, [v(i) for i in range(2, 7)])
        y_set = [(v(2), v(4), v(6)), (x, v(1), v(2)), (y, v(2), v(3)),
                 (x, v(3), v(4)), (y, v(4), v(5)), (x, v(5), v(6))]
        if dy == 6:
            x_set += [(y, v(7)), (v(6), v(7))]
            y_set.append((y, v(6), v(7)))
    elif case == "a3":
        drawing = "c" if variant is None else str(variant)
        if drawing == "c":
            c, u, z, w, b, d, a = v(3), v(4), v(4), v(5), v(5), v(6), v(7)
            optional = [(v(5), v(7)), (v(2), v(4)), (v(1), v(2)), (v(1), v(5))]
        elif drawing == "d":
            d, w, a, u, b, c, z = v(3), v(4), v(4), v(5), v(5), v(6), v(7)
            optional = [(v(4), v(5)), (v(1), v(4)), (v(2), v(5)), (v(1), v(2))]
        else:
            raise ReductionError("case a3 takes variant 'c' or 'd'")
        x_hood = range(1, 7)
        y_hood = range(3, 8)
        full = {edge(v(i), v(j)) for i, j in combinations(x_hood, 2)}
        full |= {edge(v(i), v(j)) for i, j in combinations(y_hood, 2)}
        edges = full if include_optional else full - {edge(*e) for e in optional}
        edges |= star(x, x_hood) | star(y, y_hood)
        g = Graph(9, edges)
        x_set = [(x, v(1)), (x, v(2)), (v(1), u), (v(2), w)] + _induced_edges(g, [v(i) for i in y_hood])
        y_set = [(x, c, d), (y, a, c), (y, b, d), (z, a, d), (z, b, c), (x, v(1), u), (x, v(2), w)]
    elif case == "b":
        edges = {edge(v(2), v(3)), edge(v(3), v(4)), edge(v(4), v(5)), edge(v(5), v(2))}
        if include_optional:
            edges |= {edge(v(2), v(4)), edge(v(3), v(5))}
            edges |= {edge(v(o), v(i)) for o in (1, 6) for i in range(2, 6)}
        edges |= star(x, range(1, 6)) | star(y, range(2, 7))
        g = Graph(8, edges)
        x_set = [(x, v(1)), (y, v(6))] + _induced_edges(g, [v(i) for i in range(2, 6)])
        y_set = [(x, v(2), v(5)), (x, v(3), v(4)), (y, v(2), v(3)), (y, v(4), v(5))]
    elif case == "c1":
        edges = _clique_minus(range(1, 6), [(3, 5)]) | _clique_minus(range(3, 8), [(3, 5)])
        edges |= star(x, range(1, 6)) | star(y, range(3, 8))
        g = Graph(9, edges)
        x_set = [(v(2), v(3)), (v(2), v(4)), (v(3), v(4)), (v(4), v(5)), (v(4), v(6)), (v(5), v(6)),
                 (v(2), v(5)), (v(1), v(3)), (v(3), v(6)), (v(5), v(7)), (x, v(1)), (y, v(7))]
        y_set = [(v(2), v(3), v(4)), (v(4), v(5), v(6)), (x, v(1), v(3)),
                 (x, v(2), v(5)), (y, v(3), v(6)), (y, v(5), v(7))]
    elif case in ("c2", "c3"):
        w, z = (v(4), v(6)) if case == "c2" else (v(6), v(4))
        optional = [] if include_optional else [(1, 2), (1, 3), (1, 4)]
        edges = _clique_minus(range(1, 6), optional)
        edges |= {edge(a, b) for a, b in combinations([v(i) for i in range(3, 8)], 2)} - {edge(z, v(7))}
        edges |= star(x, range(1, 6)) | star(y, range(3, 8))
        g = Graph(9, edges)
        x_set = _induced_edges(g, [v(i) for i in range(3, 8)]) + [(x, v(1)), (x, v(2)), (v(2), v(4))]
        y_set = [(x, v(3), v(5)), (x, v(2), v(4)), (y, v(3), v(7)),
                 (v(3), v(4), v(6)), (y, v(5), z), (v(5), v(7), w)]
    else:
        raise ReductionError(f"unknown case {case!r}; expected one of {', '.join(LEMMA34_CASES)}")
    return g, ReducingTriple.of({x, y}, x_set, y_set)


# -- small-degree conditions ------------------------------------------------------------------


def _closed(g: Graph, v: int) -> int:
    return g.adjacency_mask(v) | 1 << v


def puleo_violations(g: Graph) -> list[tuple[str, tuple[int, ...]]]:
    """Instances of the four small-degree conditions that every irreducible robust graph obeys.

    Returns ``(label, vertices)`` pairs; a robust graph with a nonempty list
    therefore has a reducing triple.
    """
    out: list[tuple[str, tuple[int, ...]]] = []
    deg = [g.degree(v) for v in range(g.n)]
    for x in range(g.n):
        if deg[x] > 6:
            continue
        hood = g.neighbors(x)
        missing = [(a, b) for a, b in combinations(hood, 2) if not g.has_edge(a, b)]
        counts: dict[int, int] = {}
        for a, b in missing:
            counts[a] = counts.get(a, 0) + 1
            counts[b] = counts.get(b, 0) + 1
        if max(counts.values(), default=0) > 1 or len(missing) == 2:
            out.append(("a", (x,)))
    for x, y in g.edges:
        if deg[x] <= 6 and deg[y] <= 6:
            out.append(("b", (x, y)))
    for x in range(g.n):
        for y in range(g.n):
            if x == y:
                continue
            inside = _closed(g, y) & ~_closed(g, x) == 0
            if deg[x] == 7 and deg[y] == 6 and inside:
                out.append(("c", (x, y)))
            if deg[x] <= 8 and deg[y] == 5 and inside:
                out.append(("d", (x, y)))
    return out


# -- bounded search ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    triple: ReducingTriple | None
    exhausted: bool
    budget_exceeded: bool
    candidates: int


def _hits(tri: Triangle, xs: set[Edge]) -> bool:
    return not xs.isdisjoint(tri.edges)


def _attempt(g: Graph, v0: frozenset[int], through: list[Triangle], triangles: list[Triangle],
             x_seed: set[Edge], budget: int) -> ReducingTriple | None:
    allowed = [t for t in triangles if all(e in x_seed for e in outside_edges(t, v0))]
    y = max_packing(allowed, budget)
    candidates = [ReducingTriple.of(v0, x_seed, y)]
    # keep only what Y needs, then patch up uncovered triangles through V0 greedily
    xs = {e for t in y for e in outside_edges(t, v0)}
    left = [t for t in through if not _hits(t, xs)]
    while left:
        pool = sorted({e for t in left for e in t.edges})
        best = max(pool, key=lambda e: (sum(e in t.edges for t in left), (-e[0], -e[1])))
        xs.add(best)
        left = [t for t in left if best not in t.edges]
    candidates.append(ReducingTriple.of(v0, xs, y))
    for cand in candidates:
        if verify_reducing_triple(g, cand).valid:
            return cand
    return None


def search_reducing_triple(g: Graph, max_v0: int = 3, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Look for a reducing triple with ``|V0| <= max_v0`` near small vertex sets.

    Candidates V0 are tried by increasing size, then lexicographically. For
    each, X is seeded from the edges around V0 and Y is an exact maximum
    packing compatible with X. ``exhausted`` means every candidate V0 was
    examined without running out of budget; it does not prove that no
    reducing triple exists.
    """
    if max_v0 not in (1, 2, 3):
        raise ReductionError("max_v0 must be 1, 2 or 3")
    triangles = enumerate_triangles(g)
    overflow = False
    tried = 0
    for size in range(1, max_v0 + 1):
        for combo in combinations(range(g.n), size):
            v0 = frozenset(combo)
            tried += 1
            through = [t for t in triangles if v0.intersection(t.vertices)]
            if not through:
                return SearchResult(ReducingTriple.of(v0, (), ()), False, False, tried)
            link = {e for t in through for e in t.edges if e[0] not in v0 and e[1] not in v0}
            link |= {e for t in through for e in t.edges if e[0] in v0 and e[1] in v0}
            try:
                seeds = [link, set(min_hitting_edges(through, budget))]
                for seed in seeds:
                    found = _attempt(g, v0, through, triangles, seed, budget)
                    if found is not None:
                        return SearchResult(found, False, False, tried)
            except BudgetExceeded:
                overflow = True
    return SearchResult(None, not overflow, overflow, tried)
