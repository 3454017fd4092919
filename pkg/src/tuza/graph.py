"""Simple undirected graphs on vertices ``0..n-1`` and triangle queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised when a graph is malformed or an operation is undefined on it."""


def edge(u: int, v: int) -> Edge:
    """Return the canonical (sorted) form of the edge ``uv``."""
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, order=True)
class Triangle:
    """A vertex triple ``u < v < w``."""

    vertices: tuple[int, int, int]

    def __post_init__(self) -> None:
        a, b, c = self.vertices
        if not a < b < c:
            raise GraphError(f"triangle vertices must be strictly increasing: {self.vertices}")

    @classmethod
    def of(cls, u: int, v: int, w: int) -> Triangle:
        return cls(tuple(sorted((u, v, w))))  # type: ignore[arg-type]

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        a, b, c = self.vertices
        return ((a, b), (a, c), (b, c))

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    def __repr__(self) -> str:
        return "T{}".format(self.vertices)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``edges`` is stored as a sorted tuple of sorted pairs, so two equal graphs
    compare and serialize identically. Adjacency is cached as integer bitsets
    (bit ``v`` of ``adj[u]`` set iff ``uv`` is an edge).
    """

    n: int
    edges: tuple[Edge, ...]
    _adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        canon = set()
        for u, v in edges:
            e = edge(int(u), int(v))
            if e[0] < 0 or e[1] >= n:
                raise GraphError(f"edge {e} out of range for n={n}")
            if e in canon:
                raise GraphError(f"duplicate edge {e}")
            canon.add(e)
        adj = [0] * n
        for u, v in canon:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        object.__setattr__(self, "_adj", tuple(adj))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> Graph:
        """Build a graph, inferring ``n`` from the largest endpoint when omitted.

        Duplicate pairs (in either orientation) are merged.
        """
        es = {edge(u, v) for u, v in edges}
        if n is None:
            n = 1 + max((v for _, v in es), default=-1)
        return cls(n, es)

    # -- queries -------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self._adj[u] >> v & 1)

    def adjacency_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return _bits(self._adj[v])

    def closed_neighborhood(self, v: int) -> list[int]:
        return _bits(self._adj[v] | 1 << v)

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def common_neighbors(self, u: int, v: int) -> list[int]:
        return _bits(self._adj[u] & self._adj[v])

    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    # -- derived graphs ------------------------------------------------------

    def remove_edges(self, removed: Iterable[tuple[int, int]]) -> Graph:
        drop = {edge(u, v) for u, v in removed}
        return Graph(self.n, (e for e in self.edges if e not in drop))

    def induced_subgraph(self, keep: Iterable[int]) -> tuple[Graph, list[int]]:
        """Return ``G[keep]`` relabelled to ``0..k-1`` and the old label of each new vertex."""
        order = sorted(set(keep))
        new = {v: i for i, v in enumerate(order)}
        sub = Graph(
            len(order),
            ((new[u], new[v]) for u, v in self.edges if u in new and v in new),
        )
        return sub, order

    def remove_vertices(self, removed: Iterable[int]) -> tuple[Graph, list[int]]:
        gone = set(removed)
        return self.induced_subgraph(v for v in range(self.n) if v not in gone)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# -- triangle and neighbourhood operations ------------------------------------


def enumerate_triangles(g: Graph) -> list[Triangle]:
    """All vertex triples inducing ``K3``, in lexicographic order."""
    out = []
    for u, v in g.edges:
        # w > v keeps each triangle once, with u < v < w
        common = g.adjacency_mask(u) & g.adjacency_mask(v) & ~((1 << (v + 1)) - 1)
        for w in _bits(common):
            out.append(Triangle((u, v, w)))
    out.sort()
    return out


def is_triangle_free(g: Graph) -> bool:
    return not any(g.adjacency_mask(u) & g.adjacency_mask(v) for u, v in g.edges)


def neighborhood_components(g: Graph, v: int) -> list[frozenset[int]]:
    """Connected components of ``G[N(v)]``, ordered by smallest member."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} not in graph")
    remaining = g.adjacency_mask(v)
    comps = []
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            grow = g.adjacency_mask(low.bit_length() - 1) & remaining & ~comp
            comp |= grow
            frontier |= grow
        remaining &= ~comp
        comps.append(frozenset(_bits(comp)))
    return comps


def is_robust(g: Graph) -> bool:
    """True iff every component of every ``G[N(v)]`` has at least five vertices.

    Isolated vertices have no neighbourhood components and satisfy the
    condition vacuously.
    """
    return all(len(c) >= 5 for v in g.vertices() for c in neighborhood_components(g, v))


def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        raise GraphError("average degree of the empty graph is undefined")
    return Fraction(2 * g.m, g.n)


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    stack.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = 1
    frontier = 1
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        grow = g.adjacency_mask(low.bit_length() - 1) & ~seen
        seen |= grow
        frontier |= grow
    return seen == (1 << g.n) - 1


# -- named graphs -------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def k5_minus_e() -> Graph:
    """``K5`` without the edge ``34``."""
    return complete_graph(5).remove_edges([(3, 4)])


def figure1_graph() -> Graph:
    """Treewidth-6 graph with average degree 22/3.

    ``K6`` on ``0..5`` plus three pairwise non-adjacent vertices ``6, 7, 8``,
    each joined to all of the ``K6``.
    """
    edges = list(combinations(range(6), 2))
    edges += [(x, y) for x in (6, 7, 8) for y in range(6)]
    return Graph(9, edges)
