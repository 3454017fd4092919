"""Exact minimum triangle transversal and maximum triangle packing.

Both solvers return certificates that can be re-checked against the host
graph. They are exact: if the node budget runs out, ``BudgetExceeded`` is
raised instead of returning a heuristic value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import Edge, Graph, Triangle, edge, enumerate_triangles
from .mis import DEFAULT_BUDGET, BudgetExceeded, max_independent_set

__all__ = [
    "BudgetExceeded",
    "CertificateError",
    "PackingCertificate",
    "RatioReport",
    "TransversalCertificate",
    "check_ratio",
    "nu_exact",
    "tau_exact",
]


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class TransversalCertificate:
    edges: tuple[Edge, ...]

    @classmethod
    def of(cls, edges: Iterable[tuple[int, int]]) -> TransversalCertificate:
        return cls(tuple(sorted({edge(u, v) for u, v in edges})))

    @property
    def size(self) -> int:
        return len(self.edges)

    def validate(self, g: Graph) -> None:
        """Raise ``CertificateError`` unless removing ``edges`` leaves ``g`` triangle-free."""
        chosen = set(self.edges)
        if len(chosen) != len(self.edges):
            raise CertificateError("transversal lists an edge twice")
        for e in self.edges:
            if not g.has_edge(*e):
                raise CertificateError(f"transversal edge {e} is not in the graph")
        for t in enumerate_triangles(g):
            if chosen.isdisjoint(t.edges):
                raise CertificateError(f"triangle {t.vertices} is not hit by the transversal")

    def to_json(self) -> dict:
        return {"size": self.size, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class PackingCertificate:
    triangles: tuple[Triangle, ...]

    @classmethod
    def of(cls, triangles: Iterable[Triangle | Iterable[int]]) -> PackingCertificate:
        ts = {t if isinstance(t, Triangle) else Triangle.of(*t) for t in triangles}
        return cls(tuple(sorted(ts)))

    @property
    def size(self) -> int:
        return len(self.triangles)

    def validate(self, g: Graph) -> None:
        """Raise ``CertificateError`` unless the triangles are edge-disjoint triangles of ``g``."""
        used: set[Edge] = set()
        for t in self.triangles:
            for e in t.edges:
                if not g.has_edge(*e):
                    raise CertificateError(f"{t.vertices} is not a triangle of the graph")
                if e in used:
                    raise CertificateError(f"edge {e} is used by two packed triangles")
                used.add(e)

    def to_json(self) -> dict:
        return {"size": self.size, "triangles": [list(t.vertices) for t in self.triangles]}


def _is_valid(cert, g: Graph) -> bool:
    try:
        cert.validate(g)
    except CertificateError:
        return False
    return True


# -- minimum transversal -----------------------------------------------------------


class _HittingSet:
    """Minimum edge set hitting every triangle of one connected triangle cluster."""

    def __init__(self, tri_edges: list[int], n_edges: int, budget: int):
        self.tri_edges = tri_edges
        self.edge_tris = [0] * n_edges
        for t, mask in enumerate(tri_edges):
            for e in _bits(mask):
                self.edge_tris[e] |= 1 << t
        self.budget = budget
        self.nodes = 0
        self.best = self._greedy()
        self.best_size = self.best.bit_count()

    def _greedy(self) -> int:
        uncovered = (1 << len(self.tri_edges)) - 1
        chosen = 0
        while uncovered:
            e = max(range(len(self.edge_tris)), key=lambda i: ((self.edge_tris[i] & uncovered).bit_count(), -i))
            chosen |= 1 << e
            uncovered &= ~self.edge_tris[e]
        return chosen

    def _lower_bound(self, uncovered: int, forbidden: int) -> int:
        # uncovered triangles with pairwise disjoint allowed edges each need their own edge
        allowed = [(self.tri_edges[t] & ~forbidden, t) for t in _bits(uncovered)]
        allowed.sort(key=lambda p: (p[0].bit_count(), p[1]))
        used = 0
        packed = 0
        for mask, _ in allowed:
            if not mask & used:
                used |= mask
                packed += 1
        free = ~forbidden
        most = max((self.edge_tris[e] & uncovered).bit_count() for e in _bits(self._support(uncovered) & free))
        spread = -(-uncovered.bit_count() // most)
        return max(packed, spread)

    def _support(self, uncovered: int) -> int:
        s = 0
        for t in _bits(uncovered):
            s |= self.tri_edges[t]
        return s

    def solve(self) -> int:
        self._search((1 << len(self.tri_edges)) - 1, 0, 0, 0)
        return self.best

    def _search(self, uncovered: int, chosen: int, size: int, forbidden: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget, "transversal search")
        tri_edges, edge_tris = self.tri_edges, self.edge_tris
        # a triangle left with one allowed edge forces that edge
        forced = True
        while forced and uncovered:
            forced = False
            for t in _bits(uncovered):
                if not uncovered >> t & 1:
                    continue
                allowed = tri_edges[t] & ~forbidden
                if not allowed:
                    return
                if allowed & (allowed - 1) == 0:
                    e = allowed.bit_length() - 1
                    chosen |= allowed
                    size += 1
                    uncovered &= ~edge_tris[e]
                    forced = True
        if size >= self.best_size:
            return
        if not uncovered:
            self.best, self.best_size = chosen, size
            return
        if size + self._lower_bound(uncovered, forbidden) >= self.best_size:
            return

        def tri_key(t: int):
            allowed = tri_edges[t] & ~forbidden
            through = 0
            for e in _bits(allowed):
                through += (edge_tris[e] & uncovered).bit_count()
            return (allowed.bit_count(), -through, t)

        t = min(_bits(uncovered), key=tri_key)
        options = sorted(_bits(tri_edges[t] & ~forbidden), key=lambda e: (-(edge_tris[e] & uncovered).bit_count(), e))
        banned = forbidden
        for e in options:
            self._search(uncovered & ~edge_tris[e], chosen | 1 << e, size + 1, banned)
            banned |= 1 << e


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _triangle_clusters(triangles: list[Triangle]) -> list[list[int]]:
    """Group triangle indices into classes connected by shared edges."""
    parent = list(range(len(triangles)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[Edge, int] = {}
    for i, t in enumerate(triangles):
        for e in t.edges:
            if e in owner:
                a, b = find(owner[e]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[e] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(triangles)):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def min_hitting_edges(triangles: list[Triangle], budget: int = DEFAULT_BUDGET) -> list[Edge]:
    """Minimum set of edges meeting every triangle in ``triangles``."""
    result: list[Edge] = []
    spent = 0
    for cluster in _triangle_clusters(triangles):
        local_edges = sorted({e for i in cluster for e in triangles[i].edges})
        index = {e: k for k, e in enumerate(local_edges)}
        tri_edges = [sum(1 << index[e] for e in triangles[i].edges) for i in cluster]
        solver = _HittingSet(tri_edges, len(local_edges), budget - spent)
        best = solver.solve()
        spent += solver.nodes
        result.extend(local_edges[k] for k in _bits(best))
    return sorted(result)


def tau_exact(g: Graph, budget: int = DEFAULT_BUDGET) -> TransversalCertificate:
    """Minimum triangle transversal of ``g``."""
    cert = TransversalCertificate.of(min_hitting_edges(enumerate_triangles(g), budget))
    assert _is_valid(cert, g), "transversal solver produced an invalid certificate"
    return cert


# -- maximum packing -----------------------------------------------------------


def conflict_rows(triangles: list[Triangle]) -> list[int]:
    """Bitset rows of the graph on ``triangles`` joining triangles that share an edge."""
    by_edge: dict[Edge, int] = {}
    for i, t in enumerate(triangles):
        for e in t.edges:
            by_edge[e] = by_edge.get(e, 0) | 1 << i
    rows = []
    for i, t in enumerate(triangles):
        row = 0
        for e in t.edges:
            row |= by_edge[e]
        rows.append(row & ~(1 << i))
    return rows


def max_packing(triangles: list[Triangle], budget: int = DEFAULT_BUDGET) -> list[Triangle]:
    """Maximum edge-disjoint subfamily of ``triangles``."""
    chosen = max_independent_set(conflict_rows(triangles), budget=budget)
    return [triangles[i] for i in chosen]


def nu_exact(g: Graph, budget: int = DEFAULT_BUDGET) -> PackingCertificate:
    """Maximum triangle packing of ``g``."""
    cert = PackingCertificate.of(max_packing(enumerate_triangles(g), budget))
    assert _is_valid(cert, g), "packing solver produced an invalid certificate"
    return cert


# -- ratio check --------------------------------------------------------------------


@dataclass(frozen=True)
class RatioReport:
    tau: int
    nu: int
    a: Fraction
    b: Fraction
    holds: bool
    transversal: TransversalCertificate
    packing: PackingCertificate

    @property
    def ratio(self) -> Fraction | None:
        return Fraction(self.tau, self.nu) if self.nu else None


def check_ratio(g: Graph, a: Fraction | int | str, b: Fraction | int | str = 0, budget: int = DEFAULT_BUDGET) -> RatioReport:
    """Check ``tau(g) <= a * nu(g) + b`` with exact rationals."""
    a, b = Fraction(a), Fraction(b)
    x = tau_exact(g, budget)
    y = nu_exact(g, budget)
    return RatioReport(x.size, y.size, a, b, x.size <= a * y.size + b, x, y)
